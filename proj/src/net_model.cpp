// SPDX-License-Identifier: Apache-2.0
#include "gasperlab/net_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gasperlab {

void TraceSet::index() {
  messages.clear();
  by_sender.clear();
  std::map<std::string, std::size_t> pos;
  for (const TraceRecord& r : records) {
    auto it = pos.find(r.msg_id);
    if (it == pos.end()) {
      pos.emplace(r.msg_id, messages.size());
      by_sender[r.sender].push_back(messages.size());
      messages.push_back({r.msg_id, r.sender, {}});
      it = pos.find(r.msg_id);
    }
    messages[it->second].delays.push_back(r.delay_ms);
  }
}

DelayModel DelayModel::fixed(TimeMs d) {
  DelayModel m;
  m.variant = Variant::fixed;
  m.fixed_ms = d;
  return m;
}

DelayModel DelayModel::lognormal(double median_ms, double sigma) {
  DelayModel m;
  m.variant = Variant::lognormal;
  m.median_ms = median_ms;
  m.sigma = sigma;
  return m;
}

DelayModel DelayModel::empirical(std::shared_ptr<const TraceSet> trace, std::uint32_t sender) {
  DelayModel m;
  m.variant = Variant::empirical;
  m.trace = std::move(trace);
  m.sender = sender;
  if (!m.trace || !m.trace->by_sender.count(sender))
    throw std::invalid_argument("empirical delay model: trace has no messages from sender " +
                                std::to_string(sender));
  return m;
}

DelayModel DelayModel::targeted(std::map<ValidatorId, TimeMs> schedule) {
  DelayModel m;
  m.variant = Variant::targeted;
  m.schedule = std::move(schedule);
  return m;
}

TimeMs DelayModel::settle_bound() const {
  switch (variant) {
    case Variant::zero:
      return 0;
    case Variant::fixed:
      return fixed_ms;
    case Variant::lognormal:
      return lognormal_cap_ms;
    case Variant::empirical: {
      TimeMs worst = 0;
      for (std::size_t i : trace->by_sender.at(sender))
        for (TimeMs d : trace->messages[i].delays) worst = std::max(worst, d);
      return worst;
    }
    case Variant::targeted: {
      TimeMs worst = 0;
      for (const auto& [r, d] : schedule) worst = std::max(worst, d);
      return worst;
    }
  }
  return 0;
}

BroadcastSampler::BroadcastSampler(const DelayModel& model, SeededRandom& rng) : model_(model) {
  if (model_.variant == DelayModel::Variant::empirical) {
    const auto& ids = model_.trace->by_sender.at(model_.sender);
    const auto& msg = model_.trace->messages[ids[rng.uniform(ids.size())]];
    pool_ = msg.delays;
    msg_id_ = msg.id;
  }
}

TimeMs BroadcastSampler::sample(ValidatorId recipient, SeededRandom& rng) {
  switch (model_.variant) {
    case DelayModel::Variant::zero:
      return 0;
    case DelayModel::Variant::fixed:
      return model_.fixed_ms;
    case DelayModel::Variant::lognormal: {
      double d = rng.lognormal(model_.median_ms, model_.sigma);
      TimeMs ms = static_cast<TimeMs>(std::llround(d));
      return std::min(std::max<TimeMs>(ms, 0), model_.lognormal_cap_ms);
    }
    case DelayModel::Variant::empirical: {
      if (pool_.empty())
        throw std::runtime_error("empirical delay sampling: trace message " + msg_id_ +
                                 " has fewer receiver records than recipients");
      std::size_t i = rng.uniform(pool_.size());
      TimeMs d = pool_[i];
      pool_[i] = pool_.back();
      pool_.pop_back();
      return d;
    }
    case DelayModel::Variant::targeted: {
      auto it = model_.schedule.find(recipient);
      if (it == model_.schedule.end())
        throw std::runtime_error("targeted delay schedule missing recipient " +
                                 std::to_string(recipient));
      return it->second;
    }
  }
  return 0;
}

std::map<ValidatorId, TimeMs> sample_delays(const DelayModel& model,
                                            const std::vector<ValidatorId>& recipients,
                                            SeededRandom& rng) {
  BroadcastSampler sampler(model, rng);
  std::map<ValidatorId, TimeMs> out;
  for (ValidatorId r : recipients) out[r] = sampler.sample(r, rng);
  return out;
}

namespace {

[[noreturn]] void trace_error(std::size_t line, const std::string& what) {
  throw std::runtime_error("trace parse error at line " + std::to_string(line) + ": " + what);
}

}  // namespace

TraceSet load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  TraceSet t;
  std::string line;
  std::size_t lineno = 0;
  std::set<std::pair<std::string, std::uint32_t>> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1) {
      if (line != "msg_id,sender,receiver,delay_ms")
        trace_error(lineno, "expected header msg_id,sender,receiver,delay_ms");
      continue;
    }
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string msg, sender, receiver, delay;
    if (!std::getline(ss, msg, ',') || !std::getline(ss, sender, ',') ||
        !std::getline(ss, receiver, ',') || !std::getline(ss, delay))
      trace_error(lineno, "expected 4 comma-separated fields");
    TraceRecord r;
    r.msg_id = msg;
    try {
      long long s = std::stoll(sender);
      long long rec = std::stoll(receiver);
      long long d = std::stoll(delay);
      if (s < 0 || rec < 0) trace_error(lineno, "negative node id");
      if (d < 0) trace_error(lineno, "negative delay");
      r.sender = static_cast<std::uint32_t>(s);
      r.receiver = static_cast<std::uint32_t>(rec);
      r.delay_ms = d;
    } catch (const std::invalid_argument&) {
      trace_error(lineno, "non-numeric field");
    } catch (const std::out_of_range&) {
      trace_error(lineno, "field out of range");
    }
    if (!seen.insert({r.msg_id, r.receiver}).second)
      trace_error(lineno, "duplicate (message, receiver) pair " + r.msg_id + "," +
                              std::to_string(r.receiver));
    t.records.push_back(std::move(r));
  }
  if (lineno == 0) throw std::runtime_error("trace parse error: empty file (missing header)");
  t.index();
  return t;
}

void save_trace(const TraceSet& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file: " + path);
  out << "msg_id,sender,receiver,delay_ms\n";
  for (const TraceRecord& r : trace.records)
    out << r.msg_id << ',' << r.sender << ',' << r.receiver << ',' << r.delay_ms << '\n';
}

TraceSet generate_trace(double median_ms, double sigma, std::uint32_t nodes,
                        std::uint32_t messages, std::uint32_t sender, SeededRandom& rng) {
  if (nodes < 2) throw std::invalid_argument("generate_trace: need at least 2 nodes");
  if (sender >= nodes) throw std::invalid_argument("generate_trace: sender outside node range");
  TraceSet t;
  for (std::uint32_t m = 0; m < messages; ++m) {
    for (std::uint32_t r = 0; r < nodes; ++r) {
      if (r == sender) continue;
      TimeMs d = static_cast<TimeMs>(std::llround(rng.lognormal(median_ms, sigma)));
      t.records.push_back({"m" + std::to_string(m), sender, r, std::max<TimeMs>(d, 0)});
    }
  }
  t.index();
  return t;
}

double CdfStats::fraction_received(TimeMs t) const {
  double f = 0.0;
  for (const auto& [at, frac] : mean_cdf) {
    if (at > t) break;
    f = frac;
  }
  return f;
}

CdfStats cdf_stats(const TraceSet& trace, std::uint32_t sender) {
  auto it = trace.by_sender.find(sender);
  if (it == trace.by_sender.end() || it->second.empty())
    throw std::runtime_error("cdf_stats: no messages from sender " + std::to_string(sender));
  CdfStats s;
  std::vector<TimeMs> grid;
  for (std::size_t i : it->second) {
    auto delays = trace.messages[i].delays;
    std::sort(delays.begin(), delays.end());
    grid.insert(grid.end(), delays.begin(), delays.end());
    s.per_message_delays.push_back(std::move(delays));
  }
  s.message_count = s.per_message_delays.size();
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  s.mean_cdf.reserve(grid.size());
  bool median_set = false;
  for (TimeMs t : grid) {
    double sum = 0.0;
    for (const auto& delays : s.per_message_delays) {
      auto up = std::upper_bound(delays.begin(), delays.end(), t);
      sum += static_cast<double>(up - delays.begin()) / static_cast<double>(delays.size());
    }
    double frac = sum / static_cast<double>(s.message_count);
    s.mean_cdf.emplace_back(t, frac);
    if (!median_set && frac >= 0.5) {
      s.median = t;
      median_set = true;
    }
  }
  return s;
}

}  // namespace gasperlab
