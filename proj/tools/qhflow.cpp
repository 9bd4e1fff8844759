#include "qhflow/cli.hpp"

int main(int argc, char** argv) { return qhflow::run_cli(argc, argv); }
