#pragma once

#include <string>
#include <vector>

#include "spir/protocol.hpp"

namespace spir {

/// Human-readable symbol names: messages are letters a, b, c, ... with 1-based
/// indices; randomness is s3 (single pool) or s1_2 (pool 1, symbol 2).
std::string symbol_name(const SchemeDescriptor& d, const SymbolId& sym);

/// One line rendered as a sum, message terms first: "a2+b2+s1_1+s2_1".
std::string render_line(const SchemeDescriptor& d, const Line& line);

/// Whole plan, one text line per download: "server 2: a2+b2+s3".
std::string render_plan(const SchemeDescriptor& d, const Plan& plan);

/// Per-server list of rendered lines (for golden-table comparisons).
std::vector<std::vector<std::string>> render_rows(const SchemeDescriptor& d, const Plan& plan);

/// Canonical per-server query pattern: indices of each privately permuted
/// symbol class renamed in order of first appearance. Two targets induce
/// identical per-server query distributions over the permutation coins iff
/// their canonical patterns are equal.
std::string canonical_pattern(const SchemeDescriptor& d, const ServerPlan& sp);

/// Canonical whole-table form: plan rendered after renaming every message's
/// and every pool's indices by first use (used for structural golden tables
/// whose source uses a different numbering convention).
std::string canonical_table(const SchemeDescriptor& d, const Plan& plan);

}  // namespace spir
