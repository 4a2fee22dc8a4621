#pragma once

#include "causal/diagram.hpp"
#include "causal/expr.hpp"

#include <string>
#include <vector>

namespace causal::testing {

std::string data_path(const std::string& name);
std::string read_data(const std::string& name);
CausalDiagram load_diagram(const std::string& name);

Query effect(const std::string& y, const std::string& x);
InformationSet observe_all(const CausalDiagram& d);

/// Runs the command-line front end in process.
struct CliResult {
    int status;
    std::string out;
    std::string err;
};
CliResult run_cli(const std::vector<std::string>& args);

}  // namespace causal::testing
