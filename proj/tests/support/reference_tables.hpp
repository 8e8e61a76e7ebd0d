// Transcriptions of the reference sequence tables, in the ASCII notation of
// the emitted CSV (E1+ for E_1^+, factors latest first). Terms inside a factor
// keep the printed order, so comparisons normalise them first.
#pragma once

#include <array>
#include <string>

namespace dqi::testing {

struct ReferenceRow {
    const char* sequence;
    const char* denominator;
};

inline constexpr std::array<ReferenceRow, 6> kTableOne{{
    {"L1A12L2†", "1/(E1+*E2+)"},
    {"A12L1L2†", "-1/((E1-+E2+)*E2+)"},
    {"L2†A12L1", "1/(E2-*E1-)"},
    {"A12L2†L1", "-1/((E1-+E2+)*E1-)"},
    {"L1L2†A12", "-1/(E1+*(E1++E2-))"},
    {"L2†L1A12", "-1/(E2-*(E1++E2-))"},
}};

// Row 6 is printed as (E4- + E3-) in its first factor; island 3 still holds
// the extra electron at that point, so the consistent value is (E4- + E3+).
inline constexpr std::size_t kTableTwoMisprintedRow = 6;
inline constexpr const char* kTableTwoRowSixPrinted = "1/((E4-+E3-)*(E1-+E3+)*E3+*E2+)";

inline constexpr std::array<ReferenceRow, 24> kTableTwo{{
    {"L1A87A65A43L2†", "1/(E1+*E4+*E3+*E2+)"},
    {"A87L1A65A43L2†", "1/((E1-+E4+)*E4+*E3+*E2+)"},
    {"L1A65A87A43L2†", "1/(E1+*(E1++E4-+E3+)*E3+*E2+)"},
    {"A65L1A87A43L2†", "1/((E4-+E3+)*(E1++E4-+E3+)*E3+*E2+)"},
    {"A87A65L1A43L2†", "1/((E4++E1-)*(E1-+E3+)*E3+*E2+)"},
    {"A65A87L1A43L2†", "1/((E4-+E3+)*(E1-+E3+)*E3+*E2+)"},
    {"L1A87A43A65L2†", "1/(E1+*E4+*(E2++E3-+E4+)*E2+)"},
    {"A87L1A43A65L2†", "1/((E1-+E4+)*E4+*(E2++E3-+E4+)*E2+)"},
    {"L1A43A87A65L2†", "1/(E1+*(E1++E2++E3-)*(E2++E3-+E4+)*E2+)"},
    {"A43L1A87A65L2†", "1/((E2++E3-)*(E1++E2++E3-)*(E2++E3-+E4+)*E2+)"},
    {"A87A43L1A65L2†", "1/((E1-+E4+)*(E1-+E2++E3-+E4+)*(E2++E3-+E4+)*E2+)"},
    {"A43A87L1A65L2†", "1/((E2++E3-)*(E1-+E2++E3-+E4+)*(E2++E3-+E4+)*E2+)"},
    {"L1A65A43A87L2†", "1/(E1+*(E1++E3++E4-)*(E1++E2++E4-)*E2+)"},
    {"A65L1A43A87L2†", "1/((E3++E4-)*(E1++E3++E4-)*(E1++E2++E4-)*E2+)"},
    {"L1A43A65A87L2†", "1/(E1+*(E1++E2++E3-)*(E1++E2++E4-)*E2+)"},
    {"A43L1A65A87L2†", "1/((E2++E3-)*(E1++E2++E3-)*(E1++E2++E4-)*E2+)"},
    {"A65A43L1A87L2†", "1/((E3++E4-)*(E2++E4-)*(E1++E2++E4-)*E2+)"},
    {"A43A65L1A87L2†", "1/((E2++E3-)*(E2++E4-)*(E1++E2++E4-)*E2+)"},
    {"A87A65A43L1L2†", "1/((E1-+E4+)*(E1-+E3+)*(E1-+E2+)*E2+)"},
    {"A65A87A43L1L2†", "1/((E3++E4-)*(E1-+E3+)*(E1-+E2+)*E2+)"},
    {"A87A43A65L1L2†", "1/((E1-+E4+)*(E1-+E2++E3-+E4+)*(E1-+E2+)*E2+)"},
    {"A43A87A65L1L2†", "1/((E2++E3-)*(E1-+E2++E3-+E4+)*(E1-+E2+)*E2+)"},
    {"A65A43A87L1L2†", "1/((E3++E4-)*(E2++E4-)*(E1-+E2+)*E2+)"},
    {"A43A65A87L1L2†", "1/((E2++E3-)*(E2++E4-)*(E1-+E2+)*E2+)"},
}};

}  // namespace dqi::testing
