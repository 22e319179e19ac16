#pragma once

#include "lab/group.hpp"

#include <map>
#include <string>
#include <vector>

namespace lab {

// Merged view of the key=value config file and command-line overrides.
struct CliConfig {
    GroupKind group = GroupKind::Heisenberg;
    std::string out;              // empty = stdout
    std::string format = "csv";   // csv | json
    unsigned long long seed = 0;
    long long budget = 5'000'000;
    long long stages = 3;
    long long horizon = 256;
    std::map<std::string, std::string> kv;

    bool has(const std::string& key) const { return kv.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    long long get_ll(const std::string& key, long long fallback) const;
    Rat get_rat(const std::string& key, const Rat& fallback) const;

    GroupContext make_context() const;
};

std::map<std::string, std::string> parse_config_file(const std::string& path);

struct ExperimentReport {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<std::string, std::string>> summary;
    int exit_code = 0;

    void check(const std::string& name, bool ok);
    void note(const std::string& name, std::string value);
};

std::string report_csv(const ExperimentReport& rep);
std::string report_json(const ExperimentReport& rep);

ExperimentReport cmd_balls(const CliConfig& cfg);
ExperimentReport cmd_mset(const CliConfig& cfg);
ExperimentReport cmd_incremental(const CliConfig& cfg);
ExperimentReport cmd_avgseq(const CliConfig& cfg);
ExperimentReport cmd_hopf(const CliConfig& cfg);
ExperimentReport cmd_stack(const CliConfig& cfg);
ExperimentReport cmd_maximal(const CliConfig& cfg);

// Full argument handling; returns the process exit code (0 pass, 1 check failed,
// 2 budget exhausted / unknown).
int run_cli(int argc, char** argv);

} // namespace lab
