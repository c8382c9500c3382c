#include "abce/election.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace abce {

namespace {

// Neumaier-compensated sum; keeps normalization exact to ~1 ulp even for
// tens of thousands of voters.
double compensated_sum(const std::vector<double>& xs) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : xs) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

}  // namespace

bool Committee::contains(int candidate) const {
  return std::binary_search(members.begin(), members.end(), candidate);
}

int Committee::multiplicity(int candidate) const {
  auto [lo, hi] = std::equal_range(members.begin(), members.end(), candidate);
  return static_cast<int>(hi - lo);
}

std::vector<int> Committee::distinct() const {
  std::vector<int> out(members);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double VoteAssignment::amount(int voter, int candidate) const {
  if (voter < 0 || voter >= static_cast<int>(by_voter.size())) return 0.0;
  for (const auto& [c, a] : by_voter[voter]) {
    if (c == candidate) return a;
  }
  return 0.0;
}

double VoteAssignment::assigned(int voter) const {
  if (voter < 0 || voter >= static_cast<int>(by_voter.size())) return 0.0;
  double s = 0.0;
  for (const auto& [c, a] : by_voter[voter]) s += a;
  return s;
}

double candidate_backing(const VoteAssignment& a, int candidate) {
  double s = 0.0;
  for (const auto& entries : a.by_voter) {
    for (const auto& [c, amt] : entries) {
      if (c == candidate) s += amt;
    }
  }
  return s;
}

std::vector<double> backing_weights(const VoteAssignment& a, const Committee& w) {
  std::vector<int> uniq = w.distinct();
  std::vector<double> per_candidate(uniq.size(), 0.0);
  for (const auto& entries : a.by_voter) {
    for (const auto& [c, amt] : entries) {
      auto it = std::lower_bound(uniq.begin(), uniq.end(), c);
      if (it != uniq.end() && *it == c) per_candidate[it - uniq.begin()] += amt;
    }
  }
  std::vector<double> out;
  out.reserve(w.members.size());
  for (int c : w.members) {
    auto it = std::lower_bound(uniq.begin(), uniq.end(), c);
    out.push_back(per_candidate[it - uniq.begin()] / w.multiplicity(c));
  }
  return out;
}

double total_weight(const Election& e) { return compensated_sum(e.weights); }

Election normalize(const Election& e) {
  double total = total_weight(e);
  if (!(total > 0.0)) {
    throw std::invalid_argument("normalize: total voter weight must be positive");
  }
  if (std::abs(total - 1.0) <= 1e-12) return e;
  Election out = e;
  for (double& w : out.weights) w /= total;
  return out;
}

double approval_weight(const Election& e, const std::vector<int>& candidate_set) {
  std::vector<char> in_set(e.candidates.size(), 0);
  for (int c : candidate_set) {
    if (c < 0 || c >= e.num_candidates()) {
      throw std::invalid_argument("approval_weight: unknown candidate index");
    }
    in_set[c] = 1;
  }
  double s = 0.0;
  for (int v = 0; v < e.num_voters(); ++v) {
    for (int c : e.approvals[v]) {
      if (c >= 0 && c < e.num_candidates() && in_set[c]) {
        s += e.weights[v];
        break;
      }
    }
  }
  return s;
}

std::vector<int> supporters(const Election& e, int candidate) {
  if (candidate < 0 || candidate >= e.num_candidates()) {
    throw std::invalid_argument("supporters: unknown candidate index");
  }
  std::vector<int> out;
  for (int v = 0; v < e.num_voters(); ++v) {
    for (int c : e.approvals[v]) {
      if (c == candidate) {
        out.push_back(v);
        break;
      }
    }
  }
  return out;
}

std::vector<std::vector<int>> supporters_index(const Election& e) {
  std::vector<std::vector<int>> idx(e.candidates.size());
  for (int v = 0; v < e.num_voters(); ++v) {
    for (int c : e.approvals[v]) {
      if (c >= 0 && c < e.num_candidates()) idx[c].push_back(v);
    }
  }
  return idx;
}

std::vector<double> candidate_approval_weights(const Election& e) {
  std::vector<double> w(e.candidates.size(), 0.0);
  for (int v = 0; v < e.num_voters(); ++v) {
    std::unordered_set<int> seen;
    for (int c : e.approvals[v]) {
      if (c >= 0 && c < e.num_candidates() && seen.insert(c).second) {
        w[c] += e.weights[v];
      }
    }
  }
  return w;
}

std::vector<std::string> validate(const Election& e) {
  std::vector<std::string> out;
  if (e.k <= 0) out.push_back("k must be positive");
  if (e.k > e.num_candidates()) out.push_back("k exceeds candidate count");
  if (e.weights.size() != e.voters.size() || e.approvals.size() != e.voters.size()) {
    out.push_back("voter, weight, and ballot counts differ");
    return out;
  }
  if (e.ballot_cap && *e.ballot_cap <= 0) out.push_back("ballot cap must be positive");
  for (int v = 0; v < e.num_voters(); ++v) {
    if (e.weights[v] < 0.0) {
      out.push_back("negative weight for voter " + e.voters[v]);
    }
    std::unordered_set<int> seen;
    for (int c : e.approvals[v]) {
      if (c < 0 || c >= e.num_candidates()) {
        out.push_back("ballot of voter " + e.voters[v] + " references unknown candidate index " +
                      std::to_string(c));
      } else if (!seen.insert(c).second) {
        out.push_back("duplicate approval in ballot of voter " + e.voters[v]);
      }
    }
    if (e.ballot_cap && static_cast<int>(e.approvals[v].size()) > *e.ballot_cap) {
      out.push_back("ballot of voter " + e.voters[v] + " exceeds ballot cap");
    }
  }
  double total = total_weight(e);
  if (std::abs(total - 1.0) > 1e-12) {
    out.push_back("weights not normalized (sum to " + std::to_string(total) + ")");
  }
  return out;
}

std::vector<std::string> validate_assignment(const Election& e, const Committee& w,
                                             const VoteAssignment& a,
                                             bool require_complete) {
  std::vector<std::string> out;
  if (a.by_voter.size() != e.voters.size()) {
    out.push_back("assignment voter count differs from election");
    return out;
  }
  for (int v = 0; v < e.num_voters(); ++v) {
    double spent = 0.0;
    bool has_winner = false;
    for (int c : e.approvals[v]) {
      if (w.contains(c)) has_winner = true;
    }
    for (const auto& [c, amt] : a.by_voter[v]) {
      if (amt < -1e-12) out.push_back("negative assignment for voter " + e.voters[v]);
      if (amt > 0.0) {
        bool approved = false;
        for (int ac : e.approvals[v]) approved |= (ac == c);
        if (!approved) out.push_back("voter " + e.voters[v] + " pays an unapproved candidate");
        if (!w.contains(c)) out.push_back("voter " + e.voters[v] + " pays a non-member");
      }
      spent += amt;
    }
    if (spent > e.weights[v] + 1e-9) {
      out.push_back("voter " + e.voters[v] + " overspends its weight");
    }
    if (require_complete && has_winner && std::abs(spent - e.weights[v]) > 1e-9) {
      out.push_back("voter " + e.voters[v] + " is not fully assigned");
    }
  }
  return out;
}

}  // namespace abce
