#include <taplab/mwf.hpp>

#include <algorithm>

#include <taplab/errors.hpp>

namespace taplab {

MwfPlan most_work_first(const std::vector<WorkItem>& serial, const std::vector<WorkItem>& parallel,
                        const Rational& budget, const Rational& speed) {
  if (budget.is_negative()) throw ContractError("negative processor budget");
  MwfPlan plan;
  std::vector<const WorkItem*> order;
  for (const WorkItem& w : serial) {
    if (w.remaining.is_positive()) order.push_back(&w);
  }
  std::sort(order.begin(), order.end(), [](const WorkItem* a, const WorkItem* b) {
    if (a->remaining != b->remaining) return a->remaining > b->remaining;
    return a->id < b->id;
  });

  struct Group {
    Rational remaining;
    Rational rate;
  };
  std::vector<Group> groups;
  Rational avail = budget;
  for (std::size_t k = 0; k < order.size();) {
    std::size_t e = k;
    while (e < order.size() && order[e]->remaining == order[k]->remaining) ++e;
    const Rational g(static_cast<long>(e - k));
    Rational rate(1);
    if (avail < g) rate = avail / g;
    for (std::size_t m = k; m < e; ++m) plan.alloc.set(order[m]->id, rate);
    avail -= rate * g;
    groups.push_back({order[k]->remaining, rate});
    k = e;
  }
  for (std::size_t k = 0; k + 1 < groups.size(); ++k) {
    const Group& a = groups[k];
    const Group& b = groups[k + 1];
    if (a.rate > b.rate) {
      const Rational dt = (a.remaining - b.remaining) / (speed * (a.rate - b.rate));
      if (!plan.crossing || dt < *plan.crossing) plan.crossing = dt;
    }
  }

  if (avail.is_positive()) {
    const WorkItem* target = nullptr;
    for (const WorkItem& w : parallel) {
      if (w.remaining.is_positive() && (!target || w.id < target->id)) target = &w;
    }
    if (target) plan.alloc.set(target->id, avail);
  }
  return plan;
}

Allocation most_work_first_alloc(const std::vector<WorkItem>& serial, const std::vector<WorkItem>& parallel,
                                 const Rational& budget) {
  return most_work_first(serial, parallel, budget).alloc;
}

}  // namespace taplab
