// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gasperlab/experiments.hpp"

namespace gasperlab {

// JSON round-trip of ExperimentConfig; field names match the struct members.
// Absent fields keep their defaults; malformed fields raise invalid_argument
// naming the field. An empirical delay model is loaded from `trace_path`.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
// Canonical form: every field emitted, keys sorted, 2-space indent, newline
// terminated. dump(parse(dump(c))) == dump(c).
std::string dump_config(const ExperimentConfig& config);
void save_config(const ExperimentConfig& config, const std::string& path);

// One row per run:
// strategy,k,t_delay_ms,seed,success,reorg_len,stall_slots,adv_votes_spent,
// offenses,finality_delay_epochs
std::string results_csv(const ExperimentConfig& config,
                        const std::vector<std::pair<std::uint64_t, RunRecord>>& runs);

// One row per grid point: t_delay_ms,mean_stall_slots,trials
std::string sweep_csv(const SweepResult& result);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

const char* strategy_name(StrategyKind kind);
StrategyKind strategy_from_name(const std::string& name);

}  // namespace gasperlab
