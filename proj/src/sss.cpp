#include <taplab/sched_mrt.hpp>

#include <json.hpp>

namespace taplab {

void SssScheduler::on_arrival(const SimView&, TaskId id, Actions& out) { out.start(id, Decision::Serial); }

void SssScheduler::on_instant_end(const SimView& view, Actions& out) {
  const std::vector<TaskId>& alive = view.alive();
  const std::size_t p = static_cast<std::size_t>(view.p());
  if (!serious_mode_ && alive.size() >= p) {
    serious_mode_ = true;
    non_scary_.clear();
    Interval iv{view.now(), std::nullopt, {}};
    for (TaskId id : alive) {
      if (view.arrival(id) < view.now()) {
        non_scary_.insert(id);
        iv.non_scary.push_back(id);
      }
    }
    serious_.push_back(std::move(iv));
  } else if (serious_mode_ && alive.size() < p) {
    serious_mode_ = false;
    serious_.back().end = view.now();
    non_scary_.clear();
  }

  Allocation alloc;
  if (!serious_mode_) {
    for (TaskId id : alive) alloc.set(id, Rational(1));
  } else {
    std::vector<TaskId> scary;
    for (TaskId id : alive) {
      if (non_scary_.count(id)) {
        alloc.set(id, Rational(1));
      } else {
        scary.push_back(id);
      }
    }
    for (const auto& [id, rate] : equi_alloc(scary, Rational(view.p()), true)) alloc.set(id, rate);
  }
  out.allocate(std::move(alloc));
}

std::string SssScheduler::annotations() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const Interval& iv : serious_) {
    nlohmann::ordered_json o;
    o["start"] = iv.start.str();
    o["end"] = iv.end ? nlohmann::ordered_json(iv.end->str()) : nlohmann::ordered_json(nullptr);
    o["non_scary"] = iv.non_scary;
    j.push_back(std::move(o));
  }
  return nlohmann::ordered_json{{"serious_intervals", std::move(j)}}.dump();
}

}  // namespace taplab
