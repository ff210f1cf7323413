#include <taplab/trace.hpp>

#include <algorithm>

#include <json.hpp>

#include <taplab/tap_json.hpp>

namespace taplab {

using ojson = nlohmann::ordered_json;

namespace {

auto find_entry(std::vector<Allocation::Entry>& v, TaskId id) {
  return std::lower_bound(v.begin(), v.end(), id, [](const Allocation::Entry& e, TaskId k) { return e.first < k; });
}

}  // namespace

void Allocation::add(TaskId id, const Rational& rate) {
  if (rate.is_zero()) return;
  auto it = find_entry(rates_, id);
  if (it != rates_.end() && it->first == id) {
    it->second += rate;
    if (it->second.is_zero()) rates_.erase(it);
  } else {
    rates_.insert(it, {id, rate});
  }
}

void Allocation::set(TaskId id, const Rational& rate) {
  auto it = find_entry(rates_, id);
  const bool present = it != rates_.end() && it->first == id;
  if (rate.is_zero()) {
    if (present) rates_.erase(it);
  } else if (present) {
    it->second = rate;
  } else {
    rates_.insert(it, {id, rate});
  }
}

void Allocation::erase(TaskId id) { set(id, Rational(0)); }

Rational Allocation::rate(TaskId id) const {
  auto it = std::lower_bound(rates_.begin(), rates_.end(), id,
                             [](const Entry& e, TaskId k) { return e.first < k; });
  if (it != rates_.end() && it->first == id) return it->second;
  return Rational(0);
}

Rational Allocation::total() const {
  Rational sum;
  for (const auto& e : rates_) sum += e.second;
  return sum;
}

Rational Trace::horizon() const { return slices.empty() ? Rational(0) : slices.back().end; }

Tap Trace::tap() const { return Tap{p, tasks}; }

std::string trace_to_json(const Trace& trace) {
  ojson root;
  root["p"] = trace.p;
  root["speed"] = trace.speed.str();
  root["budget"] = trace.budget.str();
  root["allow_cancel"] = trace.allow_cancel;
  root["instance"] = ojson::parse(tap_to_json(trace.tap()));
  ojson releases = ojson::array();
  for (const auto& [id, t] : trace.releases) releases.push_back({{"id", id}, {"time", t.str()}});
  root["releases"] = std::move(releases);
  ojson slices = ojson::array();
  for (const Slice& s : trace.slices) {
    ojson alloc = ojson::array();
    for (const auto& [id, r] : s.alloc) alloc.push_back({{"id", id}, {"rate", r.str()}});
    slices.push_back({{"start", s.start.str()}, {"end", s.end.str()}, {"alloc", std::move(alloc)}});
  }
  root["slices"] = std::move(slices);
  ojson decisions = ojson::array();
  for (const auto& [id, d] : trace.decisions) {
    ojson o{{"id", id}, {"decision", to_string(d.decision)}, {"decision_time", d.decision_time.str()}};
    o["start_time"] = d.start_time ? ojson(d.start_time->str()) : ojson(nullptr);
    decisions.push_back(std::move(o));
  }
  root["decisions"] = std::move(decisions);
  ojson completions = ojson::array();
  for (const auto& [id, t] : trace.completions) completions.push_back({{"id", id}, {"time", t.str()}});
  root["completions"] = std::move(completions);
  ojson cancellations = ojson::array();
  for (const auto& [id, t] : trace.cancellations) cancellations.push_back({{"id", id}, {"time", t.str()}});
  root["cancellations"] = std::move(cancellations);
  root["events"] = trace.events;
  root["aux"] = trace.aux.empty() ? ojson(nullptr) : ojson::parse(trace.aux);
  return root.dump();
}

namespace {

class Digest {
 public:
  void feed(std::string_view s) {
    for (unsigned char c : s) {
      h_ ^= c;
      h_ *= 0x100000001b3ULL;
    }
    h_ ^= 0xff;
    h_ *= 0x100000001b3ULL;
  }
  void feed(const Rational& r) { feed(r.str()); }
  void feed(std::int64_t v) { feed(std::to_string(v)); }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::uint64_t trace_digest(const Trace& trace) {
  Digest d;
  d.feed(tap_to_json(trace.tap()));
  d.feed(trace.speed);
  d.feed(trace.budget);
  for (const auto& [id, t] : trace.releases) {
    d.feed(id);
    d.feed(t);
  }
  for (const Slice& s : trace.slices) {
    d.feed(s.start);
    d.feed(s.end);
    for (const auto& [id, r] : s.alloc) {
      d.feed(id);
      d.feed(r);
    }
  }
  for (const StartEvent& s : trace.starts) {
    d.feed(s.id);
    d.feed(to_string(s.decision));
    d.feed(s.time);
  }
  for (const auto& [id, t] : trace.completions) {
    d.feed(id);
    d.feed(t);
  }
  for (const auto& [id, t] : trace.cancellations) {
    d.feed(id);
    d.feed(t);
  }
  d.feed(trace.aux);
  return d.value();
}

}  // namespace taplab
