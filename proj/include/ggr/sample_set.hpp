#ifndef GGR_SAMPLE_SET_HPP_
#define GGR_SAMPLE_SET_HPP_

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace ggr {

enum class SampleDomain { amplitude, intensity };

inline const char* to_string(SampleDomain d) {
  return d == SampleDomain::amplitude ? "amplitude" : "intensity";
}

/// Nonnegative observations plus the amplitude/intensity tag they carry.
struct SampleSet {
  std::vector<double> values;
  SampleDomain domain = SampleDomain::amplitude;
  std::string provenance;

  void validate() const {
    if (values.empty()) throw std::invalid_argument("SampleSet: empty");
    for (double v : values)
      if (!std::isfinite(v) || v < 0.0)
        throw std::invalid_argument(
            "SampleSet: values must be nonnegative and finite");
  }
};

}  // namespace ggr

#endif  // GGR_SAMPLE_SET_HPP_
