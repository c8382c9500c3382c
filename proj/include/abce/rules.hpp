#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "abce/election.hpp"

namespace abce {

enum class RuleId { av, sav, seq_pav, seq_phragmen, mes, phragmms };

std::string_view rule_name(RuleId id);
std::optional<RuleId> rule_from_name(std::string_view name);

/// Marks which phase of MES produced a round (the main q-affordability phase
/// or the seq-Phragmen completion). Only filled for MES traces.
enum class TracePhase { mes, completion };

/// Per-round record of a rule run: candidates in order of selection plus the
/// rule-specific scalar of each round (approval weights for AV, scores for
/// SAV/seq-PAV/Phragmms, election times for seq-Phragmen, q-values and
/// completion times for MES).
struct SelectionTrace {
  RuleId rule = RuleId::av;
  std::vector<int> order;
  std::vector<double> per_round;
  std::vector<TracePhase> phases;  // MES only
};

struct RuleOptions {
  bool allow_copies = false;  // multi-copy committees; only the sequential rules
};

struct RuleResult {
  Committee committee;
  SelectionTrace trace;
};

RuleResult run_av(const Election& e);
RuleResult run_sav(const Election& e);
RuleResult run_seq_pav(const Election& e, const RuleOptions& options = {});

/// Event-driven continuous-time simulation. Voters accrue money at speed
/// w(v) starting from initial_money (all zeros by default); a candidate is
/// elected as soon as its supporters jointly hold one unit, which resets
/// their money. Throws std::runtime_error when fewer than k candidates can
/// ever be elected.
RuleResult run_seq_phragmen(const Election& e, const RuleOptions& options = {},
                            const std::vector<double>& initial_money = {});

/// Method of Equal Shares with budgets k*w(v); unfilled seats are completed
/// by seq-Phragmen seeded with the leftover budgets.
RuleResult run_mes(const Election& e, const RuleOptions& options = {});

/// Iteratively inserts the candidate with the highest insertable backing
/// weight (the largest t such that t stake can be moved to the candidate
/// using only supporters' slack and stake held by members backed below t),
/// rebalancing the vote assignment after every insertion.
RuleResult run_phragmms(const Election& e, const RuleOptions& options = {});

RuleResult run_rule(RuleId rule, const Election& e, const RuleOptions& options = {});

/// Complete assignment that maximizes the total backing weight and, among
/// those, minimizes the sum of squared backing weights. Computed by local
/// rebalancing sweeps until the local-balance residual drops below 1e-8,
/// capped at max_sweeps passes over the voters.
VoteAssignment balanced_assignment(const Election& e, const Committee& w,
                                   int max_sweeps = 1000);

}  // namespace abce
