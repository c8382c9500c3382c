#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace abce {

/// A weighted approval-based committee election: candidates, voters with
/// nonnegative weights, one approval ballot per voter, and the committee
/// size k. Rules and measures expect the weights to be normalized (summing
/// to 1); use normalize() after loading raw stakes.
struct Election {
  std::vector<std::string> candidates;
  std::vector<std::string> voters;
  std::vector<double> weights;              // one entry per voter
  std::vector<std::vector<int>> approvals;  // candidate indices per voter
  int k = 0;
  std::optional<int> ballot_cap;

  int num_candidates() const { return static_cast<int>(candidates.size()); }
  int num_voters() const { return static_cast<int>(voters.size()); }
};

/// A selected committee. Members are kept sorted ascending; duplicates are
/// permitted only in multi-copy mode, where the committee is a multiset.
struct Committee {
  std::vector<int> members;

  bool contains(int candidate) const;
  int multiplicity(int candidate) const;
  int size() const { return static_cast<int>(members.size()); }
  /// Distinct members, ascending.
  std::vector<int> distinct() const;
};

/// A split of voter weight onto approved committee members. entries(v,c) > 0
/// requires c in A_v, and each voter assigns at most its weight. A complete
/// assignment spends every voter with an approved winner fully.
struct VoteAssignment {
  // by_voter[v]: (candidate, amount) pairs with amount > 0, sorted by candidate
  std::vector<std::vector<std::pair<int, double>>> by_voter;

  double amount(int voter, int candidate) const;
  double assigned(int voter) const;
};

/// Total backing weight of one candidate under the assignment.
double candidate_backing(const VoteAssignment& a, int candidate);

/// Backing weight per committee slot, aligned with committee.members. Copies
/// of the same candidate share its total backing equally.
std::vector<double> backing_weights(const VoteAssignment& a, const Committee& w);

/// Sum of all voter weights (compensated summation).
double total_weight(const Election& e);

/// Scales weights so they sum to 1 (within 1e-12). Elections already
/// normalized are returned unchanged, which makes the operation idempotent
/// bit for bit. Throws std::invalid_argument when the total weight is zero.
Election normalize(const Election& e);

/// Summed weight of voters approving at least one candidate from the set.
/// Throws std::invalid_argument on an out-of-range candidate index.
double approval_weight(const Election& e, const std::vector<int>& candidate_set);

/// Voters approving the given candidate, ascending.
std::vector<int> supporters(const Election& e, int candidate);

/// supporters() for every candidate at once.
std::vector<std::vector<int>> supporters_index(const Election& e);

/// Approval weight of each single candidate.
std::vector<double> candidate_approval_weights(const Election& e);

/// Checks all Election invariants and returns human-readable descriptions of
/// the violations found (empty means the election is valid). Violations are
/// data, not errors.
std::vector<std::string> validate(const Election& e);

/// Invariant check for assignments; returns violation descriptions.
/// With require_complete, voters with an approved winner must be fully spent.
std::vector<std::string> validate_assignment(const Election& e, const Committee& w,
                                             const VoteAssignment& a,
                                             bool require_complete);

}  // namespace abce
