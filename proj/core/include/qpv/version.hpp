#pragma once

namespace qpv {

inline constexpr const char* kToolName = "qpvlab";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

}  // namespace qpv
