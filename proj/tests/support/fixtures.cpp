#include "support/fixtures.hpp"

#include "cli.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace causal::testing {

std::string data_path(const std::string& name) { return std::string(CAUSAL_TEST_DATA) + "/" + name; }

std::string read_data(const std::string& name) {
    std::ifstream in(data_path(name));
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

CausalDiagram load_diagram(const std::string& name) { return parse_diagram(read_data(name)); }

Query effect(const std::string& y, const std::string& x) { return Query{{y}, {}, {x}}; }

InformationSet observe_all(const CausalDiagram& d) {
    return InformationSet{VarSet(d.vertices().begin(), d.vertices().end()), {}};
}

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int status = cli::run(args, out, err);
    return {status, out.str(), err.str()};
}

}  // namespace causal::testing
