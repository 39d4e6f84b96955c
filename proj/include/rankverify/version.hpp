#pragma once

namespace rankverify {

inline constexpr const char* kToolName = "rankverify";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchema = 1;

}  // namespace rankverify
