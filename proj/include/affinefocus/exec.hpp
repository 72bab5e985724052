#pragma once

namespace af {

// Scans and audits run either serially or with OpenMP over independent
// work items. Both must produce identical results; tests compare them.
enum class Exec { Serial, OpenMP };

}  // namespace af
