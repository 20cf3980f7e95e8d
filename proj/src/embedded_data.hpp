#pragma once

namespace reiqc::detail {

extern const char* const kLevelsCsv;
extern const char* const kJuddOfeltCsv;
extern const char* const kSchemesCsv;

}  // namespace reiqc::detail
