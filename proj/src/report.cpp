#include "g2local/report.hpp"

#include <json.hpp>

#include <sstream>
#include <stdexcept>

namespace g2local {

void RunConfig::validate() const {
    if (prime < 5) throw std::domain_error("config: prime must be >= 5");
    if (n_max < 0) throw std::domain_error("config: n range must be nonnegative");
    if (budget == 0) throw std::domain_error("config: budget must be positive");
    if (jobs < 1) throw std::domain_error("config: jobs must be >= 1");
    if (format != "json" && format != "csv") throw std::domain_error("config: unknown format");
    if (D_override && *D_override % prime == 0 && *D_override != 0)
        throw std::domain_error("config: D must be zero or a unit");
    if (N_override && *N_override % prime == 0 && *N_override != 0)
        throw std::domain_error("config: N must be zero or a unit");
}

std::string Report::to_json(const RunConfig& cfg) const {
    nlohmann::json j;
    j["version"] = "1.0";
    j["config"] = {{"prime", cfg.prime},
                   {"etype", etype_name(cfg.etype)},
                   {"n_max", cfg.n_max},
                   {"k_max", cfg.k_max},
                   {"order", cfg.order},
                   {"budget", cfg.budget},
                   {"jobs", cfg.jobs},
                   {"corrected", cfg.corrected}};
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) {
        arr.push_back({{"id", c.id},
                       {"instance", c.instance},
                       {"lhs", c.lhs},
                       {"rhs", c.rhs},
                       {"equal", c.equal},
                       {"provenance", c.provenance == Provenance::paper_formula
                                          ? "paper-formula"
                                          : "corrected-variant"},
                       {"ms", c.ms}});
    }
    j["checks"] = arr;
    j["summary"] = {{"total", total()}, {"failures", failures()}, {"exit", exit_status()}};
    return j.dump(2);
}

std::string Report::to_csv() const {
    std::ostringstream os;
    os << "id,instance,lhs,rhs,equal,provenance,ms\n";
    for (const auto& c : checks) {
        auto esc = [](const std::string& s) {
            std::string r = "\"";
            for (char ch : s) {
                if (ch == '"') r += "\"\"";
                else r += ch;
            }
            return r + "\"";
        };
        os << esc(c.id) << ',' << esc(c.instance) << ',' << esc(c.lhs) << ',' << esc(c.rhs)
           << ',' << (c.equal ? "true" : "false") << ','
           << (c.provenance == Provenance::paper_formula ? "paper-formula" : "corrected-variant")
           << ',' << c.ms << '\n';
    }
    return os.str();
}

}  // namespace g2local
