#pragma once

#include <optional>
#include <string>

namespace remrec {

enum class Verdict { Pass, Fail, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

/// The (t, a, b) triple reproducing the extreme value of a check: for
/// grid checks a and b are the two states compared at time t, for
/// trajectory checks they are the two solution values.
struct Witness {
  double t = 0.0;
  double a = 0.0;
  double b = 0.0;
};

/// Outcome of an empirical hypothesis check. Every verdict comes from a
/// finite sample, never a proof.
struct PropertyReport {
  std::string property;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<Witness> witness;
  double extreme = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;
  std::string note;

  bool passed() const noexcept { return verdict == Verdict::Pass; }
};

}  // namespace remrec
