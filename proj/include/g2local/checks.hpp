#pragma once

// Check-suite drivers shared by the CLI and the acceptance binary.

#include "g2local/report.hpp"

#include <string>

namespace g2local {

// Main identity D_s^{Psi_E} = F*(Psi_E,.,s) * P_s over the configured grid,
// both d-branches, with optional truncated-series cross-checks.
Report cmd_check_identity(const RunConfig& cfg);

// Oracle-vs-closed-form lemma checks: kappa, Gaussian sums, the special
// integrals, and the shell integrals.
Report cmd_check_lemmas(const RunConfig& cfg);

// Poincare generating identity over a rational-torus grid and formal torus.
Report cmd_check_lfactor(const RunConfig& cfg);

// CSV value tables for F*, GS, D_s over the grid with branch tags.
std::string cmd_table(const RunConfig& cfg);

// Support grid for one etype: all (n, m) with 0 <= n <= n_max admitted by
// the support conditions at d = 0.
std::vector<std::pair<long, long>> support_grid(LocalCubicType t, long n_max,
                                                 long m_max = -1);

}  // namespace g2local
