#pragma once

#include <optional>
#include <string>
#include <vector>

namespace hdgdd {

struct ErrorReport {
  int level = 0;
  double h = 0.0;
  double err_u = 0.0;
  double err_phi = 0.0;
  double err_q = 0.0;
  double err_p = 0.0;
};

struct EocRow {
  ErrorReport report;
  std::optional<double> rate_u;
  std::optional<double> rate_phi;
  std::optional<double> rate_q;
  std::optional<double> rate_p;
};

/// log2(coarse / fine); empty when either error is not positive.
[[nodiscard]] std::optional<double> observed_rate(double coarse, double fine);

/// Rates between consecutive reports. Throws InputError if h does not halve
/// (relative tolerance 1e-6) between neighbours or the list is empty.
[[nodiscard]] std::vector<EocRow> eoc_table(const std::vector<ErrorReport>& reports);

/// Rates of a single error column for successive halvings.
[[nodiscard]] std::vector<double> rates(const std::vector<double>& errors);

/// CSV with header level,h,err_u,rate_u,err_phi,rate_phi,err_q,rate_q,err_p,rate_p.
[[nodiscard]] std::string eoc_csv(const std::vector<EocRow>& rows);

/// 6 significant digits in scientific notation.
[[nodiscard]] std::string format_number(double v);

} // namespace hdgdd
