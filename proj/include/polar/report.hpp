#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "polar/sim.hpp"

namespace polar {

enum class ReportFormat { csv, table };

// One formatted data row (no newline), identical wording in both formats'
// numeric cells; exposed so round-trip tests can pin the exact bytes.
std::string format_csv_row(const PointStats& p);

// Emit the full report: '#'-prefixed meta lines, a column header, one row
// per Eb/N0 point.  CSV is machine-ready; the table is column-aligned.
void write_report(std::ostream& os, ReportFormat format,
                  const std::vector<std::string>& meta, const SimStats& stats);

} // namespace polar
