#include "abce/rules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace abce {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Committee make_committee(std::vector<int> order) {
  std::sort(order.begin(), order.end());
  return Committee{std::move(order)};
}

// Candidates ranked by (-score, index); used by AV and SAV.
RuleResult pick_top_k(const Election& e, RuleId rule, const std::vector<double>& score) {
  std::vector<int> idx(e.candidates.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (score[a] != score[b]) return score[a] > score[b];
    return a < b;
  });
  idx.resize(e.k);
  SelectionTrace trace;
  trace.rule = rule;
  trace.order = idx;
  for (int c : idx) trace.per_round.push_back(score[c]);
  return RuleResult{make_committee(idx), std::move(trace)};
}

// ---------------------------------------------------------------------------
// seq-Phragmen engine, shared with the MES completion phase.
// ---------------------------------------------------------------------------

struct PhragmenOutcome {
  std::vector<int> order;
  std::vector<double> times;
};

PhragmenOutcome phragmen_engine(const Election& e,
                                const std::vector<std::vector<int>>& supp_idx,
                                const std::vector<double>& approval_w,
                                std::vector<int> pool, int seats,
                                std::vector<double>& money, bool allow_copies) {
  // A candidate with zero-weight support can only ever be elected from the
  // money it already holds; that money never grows.
  int electable = 0;
  for (int c : pool) {
    double held = 0.0;
    for (int v : supp_idx[c]) held += money[v];
    if (approval_w[c] > 0.0 || held >= 1.0) ++electable;
  }
  int needed = allow_copies ? std::min(seats, 1) : seats;
  if (electable < needed) {
    throw std::runtime_error("insufficient electable candidates");
  }

  PhragmenOutcome out;
  double t_now = 0.0;
  for (int seat = 0; seat < seats; ++seat) {
    double best_t = kInf;
    int best_c = -1;
    for (int c : pool) {
      double held = 0.0;
      for (int v : supp_idx[c]) held += money[v];
      double t_c;
      if (held >= 1.0) {
        t_c = t_now;
      } else if (approval_w[c] > 0.0) {
        t_c = t_now + (1.0 - held) / approval_w[c];
      } else {
        continue;
      }
      if (t_c < best_t) {
        best_t = t_c;
        best_c = c;
      }
    }
    if (best_c < 0) throw std::runtime_error("insufficient electable candidates");
    double dt = best_t - t_now;
    if (dt > 0.0) {
      for (int v = 0; v < e.num_voters(); ++v) money[v] += e.weights[v] * dt;
    }
    t_now = best_t;
    for (int v : supp_idx[best_c]) money[v] = 0.0;
    out.order.push_back(best_c);
    out.times.push_back(best_t);
    if (!allow_copies) pool.erase(std::find(pool.begin(), pool.end(), best_c));
  }
  return out;
}

// Smallest q with sum_v min(b_v, q) >= 1, or infinity when unaffordable.
double min_affordable_q(std::vector<double>& budgets) {
  std::sort(budgets.begin(), budgets.end());
  int s = static_cast<int>(budgets.size());
  double prefix = 0.0;
  for (int j = 0; j < s; ++j) {
    double q = (1.0 - prefix) / (s - j);
    if (q <= budgets[j]) {
      return q <= 1.0 + 1e-12 ? q : kInf;
    }
    prefix += budgets[j];
  }
  return kInf;  // total budget below one unit
}

// ---------------------------------------------------------------------------
// Slot-based assignment engine for Phragmms and balanced_assignment. Each
// committee seat is a slot; copies of a candidate occupy separate slots.
// ---------------------------------------------------------------------------

struct SlotEngine {
  const Election& e;
  const std::vector<std::vector<int>>& supp_idx;
  std::vector<int> slot_candidate;
  std::vector<double> slot_support;
  std::vector<std::vector<int>> voter_slots;               // slots a voter approves
  std::vector<std::vector<std::pair<int, double>>> alloc;  // per voter: (slot, amount)
  std::vector<double> unassigned;
  std::vector<char> queued;
  std::vector<int> worklist;

  explicit SlotEngine(const Election& election, const std::vector<std::vector<int>>& supporters)
      : e(election),
        supp_idx(supporters),
        voter_slots(election.num_voters()),
        alloc(election.num_voters()),
        unassigned(election.weights),
        queued(election.num_voters(), 0) {}

  int add_slot(int candidate) {
    int s = static_cast<int>(slot_candidate.size());
    slot_candidate.push_back(candidate);
    slot_support.push_back(0.0);
    for (int v : supp_idx[candidate]) voter_slots[v].push_back(s);
    return s;
  }

  double alloc_amount(int v, int s) const {
    for (const auto& [slot, a] : alloc[v]) {
      if (slot == s) return a;
    }
    return 0.0;
  }

  void enqueue(int v) {
    if (!queued[v] && !voter_slots[v].empty()) {
      queued[v] = 1;
      worklist.push_back(v);
    }
  }

  void enqueue_slot_voters(int s) {
    for (int v : supp_idx[slot_candidate[s]]) enqueue(v);
  }

  // Redistributes voter v's full weight over its slots so the funded slots
  // end at a common support level (the optimal single-voter step of the
  // squared-support objective).
  void rebalance_voter(int v, double requeue_eps) {
    auto& slots = voter_slots[v];
    if (slots.empty()) return;
    struct Item {
      int slot;
      double rest;  // slot support excluding v's contribution
    };
    static thread_local std::vector<Item> items;
    items.clear();
    for (int s : slots) items.push_back({s, slot_support[s] - alloc_amount(v, s)});
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
      if (a.rest != b.rest) return a.rest < b.rest;
      return a.slot < b.slot;
    });
    double w = e.weights[v];
    int n = static_cast<int>(items.size());
    double level = 0.0;
    int funded = n;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      acc += items[j].rest;
      double lam = (w + acc) / (j + 1);
      if (j + 1 == n || lam <= items[j + 1].rest) {
        level = lam;
        funded = j + 1;
        break;
      }
    }
    static thread_local std::vector<std::pair<int, double>> next;
    next.clear();
    bool moved = false;
    for (int j = 0; j < n; ++j) {
      double a = j < funded ? std::max(0.0, level - items[j].rest) : 0.0;
      double old = alloc_amount(v, items[j].slot);
      if (a > 0.0) next.emplace_back(items[j].slot, a);
      double delta = a - old;
      if (delta != 0.0) {
        slot_support[items[j].slot] += delta;
        if (std::abs(delta) > requeue_eps) {
          moved = true;
          enqueue_slot_voters(items[j].slot);
        }
      }
    }
    std::sort(next.begin(), next.end());
    alloc[v] = next;
    unassigned[v] = 0.0;
    (void)moved;
  }

  // Worklist rebalancing until quiescent or the update budget runs out.
  void rebalance(long long max_updates, double requeue_eps) {
    long long updates = 0;
    while (!worklist.empty() && updates < max_updates) {
      int v = worklist.back();
      worklist.pop_back();
      queued[v] = 0;
      rebalance_voter(v, requeue_eps);
      ++updates;
    }
    worklist.clear();
    std::fill(queued.begin(), queued.end(), 0);
  }

  // Recomputes supports and unassigned weight from the allocations, clearing
  // accumulated floating-point drift.
  void refresh() {
    std::fill(slot_support.begin(), slot_support.end(), 0.0);
    for (int v = 0; v < e.num_voters(); ++v) {
      double spent = 0.0;
      for (auto& [s, a] : alloc[v]) {
        if (a < 0.0) a = 0.0;
        slot_support[s] += a;
        spent += a;
      }
      unassigned[v] = std::max(0.0, e.weights[v] - spent);
    }
  }

  // Highest t such that supporters of the candidate can hand it t backing
  // using their slack plus stake currently held by slots backed below t.
  double score(int candidate) const {
    double base = 0.0;
    static thread_local std::vector<std::pair<double, double>> items;  // (support, amount)
    items.clear();
    for (int v : supp_idx[candidate]) {
      base += unassigned[v];
      for (const auto& [s, a] : alloc[v]) {
        if (a > 0.0) items.emplace_back(slot_support[s], a);
      }
    }
    if (items.empty()) return base;
    std::sort(items.begin(), items.end());
    static thread_local std::vector<double> levels;
    static thread_local std::vector<double> below;  // reclaimable strictly below level j
    levels.clear();
    below.clear();
    double run = 0.0;
    for (std::size_t i = 0; i < items.size();) {
      double lv = items[i].first;
      levels.push_back(lv);
      below.push_back(run);
      while (i < items.size() && items[i].first == lv) run += items[i++].second;
    }
    int r = static_cast<int>(levels.size());
    double top = base + run;  // everything reclaimable above the last level
    if (top > levels[r - 1]) return top;
    for (int j = r - 1; j >= 0; --j) {
      double g = base + below[j];
      double cand = std::min(g, levels[j]);
      double lower = j > 0 ? levels[j - 1] : 0.0;
      if (cand > lower) return cand;
    }
    return 0.0;
  }

  // Inserts a slot for the candidate and seeds it with ~target backing,
  // drawing first on supporters' slack and then on stake held by slots
  // currently backed below target. Rebalancing follows separately.
  void insert(int candidate, double target) {
    int s_new = add_slot(candidate);
    double need = target;
    for (int v : supp_idx[candidate]) {
      if (need <= 0.0) break;
      double take = std::min(unassigned[v], need);
      if (take > 0.0) {
        alloc[v].emplace_back(s_new, take);
        unassigned[v] -= take;
        slot_support[s_new] += take;
        need -= take;
      }
      enqueue(v);
    }
    if (need > 1e-15) {
      for (int v : supp_idx[candidate]) {
        if (need <= 1e-15) break;
        for (auto& [s, a] : alloc[v]) {
          if (s == s_new || a <= 0.0) continue;
          if (slot_support[s] < target) {
            double take = std::min(a, need);
            a -= take;
            slot_support[s] -= take;
            slot_support[s_new] += take;
            need -= take;
            enqueue_slot_voters(s);
            if (need <= 1e-15) break;
          }
        }
        double add = alloc_amount(v, s_new);
        if (add > 0.0) {
          // merge the two entries for s_new if the loop above created one
          double total = 0.0;
          auto& entries = alloc[v];
          for (auto it = entries.begin(); it != entries.end();) {
            if (it->first == s_new) {
              total += it->second;
              it = entries.erase(it);
            } else {
              ++it;
            }
          }
          entries.emplace_back(s_new, total);
        }
        std::sort(alloc[v].begin(), alloc[v].end());
      }
    } else {
      for (int v : supp_idx[candidate]) std::sort(alloc[v].begin(), alloc[v].end());
    }
    enqueue_slot_voters(s_new);
  }

  VoteAssignment to_assignment() const {
    VoteAssignment out;
    out.by_voter.resize(e.num_voters());
    for (int v = 0; v < e.num_voters(); ++v) {
      std::vector<std::pair<int, double>> per_candidate;
      for (const auto& [s, a] : alloc[v]) {
        if (a <= 0.0) continue;
        per_candidate.emplace_back(slot_candidate[s], a);
      }
      std::sort(per_candidate.begin(), per_candidate.end());
      std::vector<std::pair<int, double>> merged;
      for (const auto& [c, a] : per_candidate) {
        if (!merged.empty() && merged.back().first == c) {
          merged.back().second += a;
        } else {
          merged.emplace_back(c, a);
        }
      }
      out.by_voter[v] = std::move(merged);
    }
    return out;
  }
};

constexpr double kRequeueEps = 1e-9;

long long rebalance_budget(const Election& e, int sweeps) {
  return static_cast<long long>(sweeps) * std::max(1, e.num_voters());
}

}  // namespace

std::string_view rule_name(RuleId id) {
  switch (id) {
    case RuleId::av: return "av";
    case RuleId::sav: return "sav";
    case RuleId::seq_pav: return "seq-pav";
    case RuleId::seq_phragmen: return "seq-phragmen";
    case RuleId::mes: return "mes";
    case RuleId::phragmms: return "phragmms";
  }
  return "av";
}

std::optional<RuleId> rule_from_name(std::string_view name) {
  if (name == "av") return RuleId::av;
  if (name == "sav") return RuleId::sav;
  if (name == "seq-pav" || name == "seqpav") return RuleId::seq_pav;
  if (name == "seq-phragmen" || name == "seqphragmen") return RuleId::seq_phragmen;
  if (name == "mes") return RuleId::mes;
  if (name == "phragmms") return RuleId::phragmms;
  return std::nullopt;
}

RuleResult run_av(const Election& e) {
  return pick_top_k(e, RuleId::av, candidate_approval_weights(e));
}

RuleResult run_sav(const Election& e) {
  std::vector<double> score(e.candidates.size(), 0.0);
  for (int v = 0; v < e.num_voters(); ++v) {
    if (e.approvals[v].empty()) continue;
    double share = e.weights[v] / static_cast<double>(e.approvals[v].size());
    for (int c : e.approvals[v]) score[c] += share;
  }
  return pick_top_k(e, RuleId::sav, score);
}

RuleResult run_seq_pav(const Election& e, const RuleOptions& options) {
  auto supp_idx = supporters_index(e);
  std::vector<int> sat(e.num_voters(), 0);
  std::vector<char> elected(e.candidates.size(), 0);
  SelectionTrace trace;
  trace.rule = RuleId::seq_pav;
  for (int round = 0; round < e.k; ++round) {
    double best = -1.0;
    int best_c = -1;
    for (int c = 0; c < e.num_candidates(); ++c) {
      if (!options.allow_copies && elected[c]) continue;
      double marginal = 0.0;
      for (int v : supp_idx[c]) marginal += e.weights[v] / (sat[v] + 1);
      if (marginal > best) {
        best = marginal;
        best_c = c;
      }
    }
    elected[best_c] = 1;
    for (int v : supp_idx[best_c]) ++sat[v];
    trace.order.push_back(best_c);
    trace.per_round.push_back(best);
  }
  return RuleResult{make_committee(trace.order), std::move(trace)};
}

RuleResult run_seq_phragmen(const Election& e, const RuleOptions& options,
                            const std::vector<double>& initial_money) {
  auto supp_idx = supporters_index(e);
  auto approval_w = candidate_approval_weights(e);
  std::vector<double> money = initial_money;
  money.resize(e.num_voters(), 0.0);
  std::vector<int> pool(e.candidates.size());
  std::iota(pool.begin(), pool.end(), 0);
  auto outcome =
      phragmen_engine(e, supp_idx, approval_w, std::move(pool), e.k, money, options.allow_copies);
  SelectionTrace trace;
  trace.rule = RuleId::seq_phragmen;
  trace.order = outcome.order;
  trace.per_round = outcome.times;
  return RuleResult{make_committee(outcome.order), std::move(trace)};
}

RuleResult run_mes(const Election& e, const RuleOptions& options) {
  auto supp_idx = supporters_index(e);
  std::vector<double> budget(e.num_voters());
  for (int v = 0; v < e.num_voters(); ++v) budget[v] = e.k * e.weights[v];

  std::vector<char> elected(e.candidates.size(), 0);
  SelectionTrace trace;
  trace.rule = RuleId::mes;
  std::vector<double> buf;
  while (static_cast<int>(trace.order.size()) < e.k) {
    double best_q = kInf;
    int best_c = -1;
    for (int c = 0; c < e.num_candidates(); ++c) {
      if (!options.allow_copies && elected[c]) continue;
      buf.clear();
      for (int v : supp_idx[c]) buf.push_back(budget[v]);
      double q = min_affordable_q(buf);
      if (q < best_q) {
        best_q = q;
        best_c = c;
      }
    }
    if (best_c < 0) break;  // nothing affordable; hand over to seq-Phragmen
    for (int v : supp_idx[best_c]) budget[v] = std::max(0.0, budget[v] - best_q);
    elected[best_c] = 1;
    trace.order.push_back(best_c);
    trace.per_round.push_back(best_q);
    trace.phases.push_back(TracePhase::mes);
  }

  int remaining = e.k - static_cast<int>(trace.order.size());
  if (remaining > 0) {
    auto approval_w = candidate_approval_weights(e);
    std::vector<int> pool;
    for (int c = 0; c < e.num_candidates(); ++c) {
      if (options.allow_copies || !elected[c]) pool.push_back(c);
    }
    auto outcome = phragmen_engine(e, supp_idx, approval_w, std::move(pool), remaining, budget,
                                   options.allow_copies);
    for (std::size_t i = 0; i < outcome.order.size(); ++i) {
      trace.order.push_back(outcome.order[i]);
      trace.per_round.push_back(outcome.times[i]);
      trace.phases.push_back(TracePhase::completion);
    }
  }
  return RuleResult{make_committee(trace.order), std::move(trace)};
}

RuleResult run_phragmms(const Election& e, const RuleOptions& options) {
  auto supp_idx = supporters_index(e);
  SlotEngine engine(e, supp_idx);
  std::vector<char> elected(e.candidates.size(), 0);
  SelectionTrace trace;
  trace.rule = RuleId::phragmms;
  long long budget = rebalance_budget(e, 64);
  for (int round = 0; round < e.k; ++round) {
    double best = -1.0;
    int best_c = -1;
    for (int c = 0; c < e.num_candidates(); ++c) {
      if (!options.allow_copies && elected[c]) continue;
      double s = engine.score(c);
      if (s > best) {
        best = s;
        best_c = c;
      }
    }
    engine.insert(best_c, best);
    engine.rebalance(budget, kRequeueEps);
    engine.refresh();
    elected[best_c] = 1;
    trace.order.push_back(best_c);
    trace.per_round.push_back(best);
  }
  return RuleResult{make_committee(trace.order), std::move(trace)};
}

RuleResult run_rule(RuleId rule, const Election& e, const RuleOptions& options) {
  switch (rule) {
    case RuleId::av:
      if (options.allow_copies) throw std::invalid_argument("av does not support copies");
      return run_av(e);
    case RuleId::sav:
      if (options.allow_copies) throw std::invalid_argument("sav does not support copies");
      return run_sav(e);
    case RuleId::seq_pav: return run_seq_pav(e, options);
    case RuleId::seq_phragmen: return run_seq_phragmen(e, options);
    case RuleId::mes: return run_mes(e, options);
    case RuleId::phragmms: return run_phragmms(e, options);
  }
  throw std::invalid_argument("unknown rule");
}

VoteAssignment balanced_assignment(const Election& e, const Committee& w, int max_sweeps) {
  auto supp_idx = supporters_index(e);
  SlotEngine engine(e, supp_idx);
  for (int c : w.members) engine.add_slot(c);
  // Equal split over approved slots as the starting point.
  for (int v = 0; v < e.num_voters(); ++v) {
    const auto& slots = engine.voter_slots[v];
    if (slots.empty()) continue;
    double share = e.weights[v] / static_cast<double>(slots.size());
    for (int s : slots) {
      engine.alloc[v].emplace_back(s, share);
      engine.slot_support[s] += share;
    }
    engine.unassigned[v] = 0.0;
    engine.enqueue(v);
  }
  engine.rebalance(rebalance_budget(e, max_sweeps), kRequeueEps);
  engine.refresh();
  return engine.to_assignment();
}

}  // namespace abce
