#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "lipfree/beckmann.hpp"

namespace lipfree {

std::vector<StudyRow> refine_study(const StudyProblem& problem, std::span<const double> h_list,
                                   std::span<const int> k_list, Exec exec) {
  std::vector<StudyRow> rows;
  for (double h : h_list) {
    for (int k : k_list) {
      StudyRow row;
      row.h = h;
      row.k = k;
      rows.push_back(row);
    }
  }
  if (rows.empty()) return rows;
  const double dual = kr_dual_norm(problem.molecule, problem.norm).value;

  kernels::for_each_index(
      rows.size(),
      [&](std::size_t i) {
        StudyRow& row = rows[i];
        row.dual = dual;
        const auto start = std::chrono::steady_clock::now();
        try {
          auto grid = std::make_shared<const Grid>(Grid::build(problem.domain, row.h, problem.alignment));
          const SourceVector source = assemble_source(problem.molecule, grid);
          BeckmannOptions options;
          options.facets = row.k;
          row.primal = solve_beckmann(source, problem.norm, options).value;
          row.gap = row.primal - row.dual;
        } catch (const std::exception& e) {
          row.failed = true;
          row.error = e.what();
        }
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      },
      exec);

  std::stable_sort(rows.begin(), rows.end(), [](const StudyRow& a, const StudyRow& b) {
    if (a.h != b.h) return a.h > b.h;
    return a.k < b.k;
  });
  return rows;
}

namespace {

// Values that print as zero are written without a sign.
double unsigned_zero(double v) { return std::abs(v) < 5e-10 ? 0.0 : v; }

}  // namespace

void write_study_csv(std::ostream& out, std::span<const StudyRow> rows) {
  out << "h,k,primal,dual,gap,seconds\n";
  char buffer[256];
  for (const auto& r : rows) {
    if (r.failed) {
      std::snprintf(buffer, sizeof buffer, "%.9f,%d,nan,%.9f,nan,%.9f\n", r.h, r.k, r.dual, r.seconds);
    } else {
      std::snprintf(buffer, sizeof buffer, "%.9f,%d,%.9f,%.9f,%.9f,%.9f\n", r.h, r.k, unsigned_zero(r.primal), unsigned_zero(r.dual),
                    unsigned_zero(r.gap),
                    r.seconds);
    }
    out << buffer;
  }
}

}  // namespace lipfree
