#ifndef TL_REPORT_HPP
#define TL_REPORT_HPP

#include <cstdint>
#include <string>

#include "tl/algebra.hpp"
#include "tl/dynamics.hpp"

namespace tl {

struct ReportOptions {
  bool json = false;         // structured output instead of plain text
  std::uint64_t seed = 12345;
  int samples = 25;          // sampled cases per sweep or probe trials
};

// Report builders behind the command line tool. Every report carries the
// command name, the input echo, the system digest and a notes list, and
// identical input plus identical options produce byte-identical output.
// The validate report accepts an unvalidated system and describes its
// defects; the other builders require a validated one.
std::string report_validate(const DynSystem& raw, const std::string& source,
                            const ReportOptions& opts);
std::string report_conditions(const DynSystem& sys, const std::string& source,
                              const ReportOptions& opts);
std::string report_isom(const DynSystem& sys, const std::string& source,
                        const ReportOptions& opts);
std::string report_invert(const DynSystem& sys, const CPElement& f, const std::string& source,
                          const std::string& element_source, const ReportOptions& opts);
std::string report_norms(const DynSystem& sys, const CPElement& f, const std::string& source,
                         const std::string& element_source, const ReportOptions& opts);
std::string report_family(const DynSystem& sys, const std::string& source,
                          const ReportOptions& opts);
std::string report_witness(const DynSystem& sys, const std::string& source,
                           const ReportOptions& opts);

}  // namespace tl

#endif  // TL_REPORT_HPP
