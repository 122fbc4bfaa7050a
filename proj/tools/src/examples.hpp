#pragma once

#include <string>
#include <vector>

namespace kseries_cli {

struct ExampleProgram {
    std::string name;
    std::string description;
    std::string source;
};

const std::vector<ExampleProgram>& example_programs();
const ExampleProgram* find_example(const std::string& name);

}  // namespace kseries_cli
