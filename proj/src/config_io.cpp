// SPDX-License-Identifier: Apache-2.0
#include "gasperlab/config_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gasperlab {
namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& name) {
  throw std::invalid_argument("config: field '" + name + "' is malformed");
}

template <typename T>
void read_field(const json& j, const std::string& name, T& out) {
  if (!j.contains(name)) return;
  try {
    j.at(name).get_to(out);
  } catch (const json::exception&) {
    bad_field(name);
  }
}

std::string read_enum(const json& j, const std::string& name, const std::string& fallback) {
  std::string value = fallback;
  read_field(j, name, value);
  return value;
}

const char* variant_name(DelayModel::Variant v) {
  switch (v) {
    case DelayModel::Variant::zero: return "zero";
    case DelayModel::Variant::fixed: return "fixed";
    case DelayModel::Variant::lognormal: return "lognormal";
    case DelayModel::Variant::empirical: return "empirical";
    case DelayModel::Variant::targeted: return "targeted";
  }
  throw std::logic_error("unknown delay variant");
}

DelayModel::Variant variant_from_name(const std::string& name) {
  if (name == "zero") return DelayModel::Variant::zero;
  if (name == "fixed") return DelayModel::Variant::fixed;
  if (name == "lognormal") return DelayModel::Variant::lognormal;
  if (name == "empirical") return DelayModel::Variant::empirical;
  if (name == "targeted") return DelayModel::Variant::targeted;
  bad_field("delay.variant");
}

const char* timing_name(AttestationTiming t) {
  return t == AttestationTiming::gasper_halfway ? "gasper_halfway" : "eth2_one_third";
}

AttestationTiming timing_from_name(const std::string& name) {
  if (name == "gasper_halfway") return AttestationTiming::gasper_halfway;
  if (name == "eth2_one_third") return AttestationTiming::eth2_one_third;
  bad_field("honest.attestation_timing");
}

void parse_params(const json& j, ProtocolParams& p) {
  read_field(j, "n_validators", p.n_validators);
  read_field(j, "committee_size", p.committee_size);
  read_field(j, "slots_per_epoch", p.slots_per_epoch);
  read_field(j, "slot_duration_ms", p.slot_duration_ms);
  read_field(j, "beta", p.beta);
}

void parse_delay(const json& j, DelayModel& d) {
  d.variant = variant_from_name(read_enum(j, "variant", variant_name(d.variant)));
  read_field(j, "fixed_ms", d.fixed_ms);
  read_field(j, "median_ms", d.median_ms);
  read_field(j, "sigma", d.sigma);
  read_field(j, "lognormal_cap_ms", d.lognormal_cap_ms);
  read_field(j, "sender", d.sender);
  if (j.contains("schedule")) {
    if (!j.at("schedule").is_object()) bad_field("delay.schedule");
    d.schedule.clear();
    for (const auto& [key, value] : j.at("schedule").items()) {
      try {
        d.schedule[static_cast<ValidatorId>(std::stoull(key))] = value.get<TimeMs>();
      } catch (const std::exception&) {
        bad_field("delay.schedule");
      }
    }
  }
}

void parse_strategy(const json& j, StrategyConfig& s) {
  s.kind = strategy_from_name(read_enum(j, "kind", strategy_name(s.kind)));
  read_field(j, "k", s.k);
  read_field(j, "t_delay_ms", s.t_delay_ms);
  read_field(j, "rebalance_budget_per_slot", s.rebalance_budget_per_slot);
  read_field(j, "targeted_mode", s.targeted_mode);
  read_field(j, "attack_slot", s.attack_slot);
  read_field(j, "attack_epoch", s.attack_epoch);
  read_field(j, "pin_roles", s.pin_roles);
  read_field(j, "pin_committees", s.pin_committees);
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");

  ExperimentConfig c;
  if (j.contains("params")) parse_params(j.at("params"), c.params);
  if (j.contains("delay")) parse_delay(j.at("delay"), c.delay);
  if (j.contains("honest"))
    c.honest.attestation_timing = timing_from_name(
        read_enum(j.at("honest"), "attestation_timing", timing_name(c.honest.attestation_timing)));
  if (j.contains("strategy")) parse_strategy(j.at("strategy"), c.strategy);
  read_field(j, "horizon", c.horizon);
  read_field(j, "trials", c.trials);
  read_field(j, "seed", c.seed);
  read_field(j, "n_adversarial", c.n_adversarial);
  read_field(j, "trace_path", c.trace_path);
  if (j.contains("sweep") && !j.at("sweep").is_null()) {
    SweepRange r;
    read_field(j.at("sweep"), "t_min", r.t_min);
    read_field(j.at("sweep"), "t_max", r.t_max);
    read_field(j.at("sweep"), "step", r.step);
    c.sweep = r;
  }

  if (c.delay.variant == DelayModel::Variant::empirical) {
    if (c.trace_path.empty())
      throw std::invalid_argument("config: field 'trace_path' required for empirical delay");
    c.delay.trace = std::make_shared<TraceSet>(load_trace(c.trace_path));
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

std::string dump_config(const ExperimentConfig& c) {
  json j;
  j["params"] = {{"n_validators", c.params.n_validators},
                 {"committee_size", c.params.committee_size},
                 {"slots_per_epoch", c.params.slots_per_epoch},
                 {"slot_duration_ms", c.params.slot_duration_ms},
                 {"beta", c.params.beta}};
  json schedule = json::object();
  for (const auto& [v, t] : c.delay.schedule) schedule[std::to_string(v)] = t;
  j["delay"] = {{"variant", variant_name(c.delay.variant)},
                {"fixed_ms", c.delay.fixed_ms},
                {"median_ms", c.delay.median_ms},
                {"sigma", c.delay.sigma},
                {"lognormal_cap_ms", c.delay.lognormal_cap_ms},
                {"sender", c.delay.sender},
                {"schedule", schedule}};
  j["honest"] = {{"attestation_timing", timing_name(c.honest.attestation_timing)}};
  j["strategy"] = {{"kind", strategy_name(c.strategy.kind)},
                   {"k", c.strategy.k},
                   {"t_delay_ms", c.strategy.t_delay_ms},
                   {"rebalance_budget_per_slot", c.strategy.rebalance_budget_per_slot},
                   {"targeted_mode", c.strategy.targeted_mode},
                   {"attack_slot", c.strategy.attack_slot},
                   {"attack_epoch", c.strategy.attack_epoch},
                   {"pin_roles", c.strategy.pin_roles},
                   {"pin_committees", c.strategy.pin_committees}};
  j["horizon"] = c.horizon;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["n_adversarial"] = c.n_adversarial;
  j["trace_path"] = c.trace_path;
  if (c.sweep)
    j["sweep"] = {{"t_min", c.sweep->t_min}, {"t_max", c.sweep->t_max}, {"step", c.sweep->step}};
  else
    j["sweep"] = nullptr;
  return j.dump(2) + "\n";
}

void save_config(const ExperimentConfig& c, const std::string& path) {
  write_file(path, dump_config(c));
}

std::string results_csv(const ExperimentConfig& config,
                        const std::vector<std::pair<std::uint64_t, RunRecord>>& runs) {
  std::ostringstream out;
  out << "strategy,k,t_delay_ms,seed,success,reorg_len,stall_slots,adv_votes_spent,"
         "offenses,finality_delay_epochs\n";
  for (const auto& [seed, rec] : runs) {
    out << strategy_name(config.strategy.kind) << ',' << config.strategy.k << ','
        << config.strategy.t_delay_ms << ',' << seed << ',' << (rec.success ? 1 : 0) << ','
        << rec.reorg_length_achieved << ',' << rec.stall_duration << ','
        << rec.adversarial_votes_spent << ',' << rec.slashable_offenses << ','
        << rec.finalization_delay << '\n';
  }
  return out.str();
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "t_delay_ms,mean_stall_slots,trials\n";
  char mean[32];
  for (const SweepPoint& p : result.points) {
    std::snprintf(mean, sizeof mean, "%.4f", p.mean_stall_slots);
    out << p.t_delay_ms << ',' << mean << ',' << p.trials << '\n';
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

const char* strategy_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::honest: return "honest";
    case StrategyKind::refined_reorg: return "refined_reorg";
    case StrategyKind::balancing: return "balancing";
    case StrategyKind::combined: return "combined";
  }
  throw std::logic_error("unknown strategy kind");
}

StrategyKind strategy_from_name(const std::string& name) {
  if (name == "honest") return StrategyKind::honest;
  if (name == "refined_reorg") return StrategyKind::refined_reorg;
  if (name == "balancing") return StrategyKind::balancing;
  if (name == "combined") return StrategyKind::combined;
  throw std::invalid_argument("config: field 'strategy.kind' is malformed");
}

}  // namespace gasperlab
