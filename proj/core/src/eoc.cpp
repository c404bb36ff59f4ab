#include "hdgdd/eoc.hpp"

#include <cmath>

#include <fmt/format.h>

#include "hdgdd/error.hpp"

namespace hdgdd {

std::optional<double> observed_rate(double coarse, double fine) {
  if (!(coarse > 0.0) || !(fine > 0.0)) {
    return std::nullopt;
  }
  return std::log2(coarse / fine);
}

std::vector<EocRow> eoc_table(const std::vector<ErrorReport>& reports) {
  if (reports.empty()) {
    throw InputError("no error reports");
  }
  std::vector<EocRow> rows;
  rows.reserve(reports.size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    EocRow row{reports[i], {}, {}, {}, {}};
    if (i > 0) {
      const ErrorReport& c = reports[i - 1];
      const ErrorReport& f = reports[i];
      if (std::abs(c.h / f.h - 2.0) > 2e-6) {
        throw InputError(fmt::format("mesh size does not halve between levels {} and {} (h = {}, {})", c.level,
                                     f.level, c.h, f.h));
      }
      row.rate_u = observed_rate(c.err_u, f.err_u);
      row.rate_phi = observed_rate(c.err_phi, f.err_phi);
      row.rate_q = observed_rate(c.err_q, f.err_q);
      row.rate_p = observed_rate(c.err_p, f.err_p);
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> rates(const std::vector<double>& errors) {
  std::vector<double> out;
  for (std::size_t i = 1; i < errors.size(); ++i) {
    out.push_back(observed_rate(errors[i - 1], errors[i]).value_or(std::nan("")));
  }
  return out;
}

std::string format_number(double v) { return fmt::format("{:.5e}", v); }

std::string eoc_csv(const std::vector<EocRow>& rows) {
  std::string out = "level,h,err_u,rate_u,err_phi,rate_phi,err_q,rate_q,err_p,rate_p\n";
  const auto opt = [](const std::optional<double>& r) { return r ? format_number(*r) : std::string(); };
  for (const auto& row : rows) {
    const auto& r = row.report;
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.level, format_number(r.h), format_number(r.err_u),
                       opt(row.rate_u), format_number(r.err_phi), opt(row.rate_phi), format_number(r.err_q),
                       opt(row.rate_q), format_number(r.err_p), opt(row.rate_p));
  }
  return out;
}

} // namespace hdgdd
