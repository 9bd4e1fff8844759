#pragma once

#include "qhflow/io.hpp"

#include <string>

namespace qhflow {

// exit codes: 0 ok, 2 bad input, 3 numeric failure, 1 anything else
int run_cli(int argc, char** argv);

struct ExampleParams {
    int m = 2, n = 2;          // ex5.6
    std::uint64_t seed = 1;
};

// ids: ex3.5 ex5.6 ex7.1 ex7.2 ex7.3; report carries "pass" for the golden verdict
json run_example(const std::string& id, const ExampleParams& p = {});

}  // namespace qhflow
