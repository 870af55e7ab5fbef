#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "patchrot/vec.hpp"

namespace patchrot {

/// Angular-velocity profiles driving the integrators: analytic generators
/// (evaluated exactly at any stage time) and zero-order-hold playback of
/// sampled rates from CSV.

struct RateSample {
  double t = 0.0;
  Vec3 rate{};
};

namespace detail {

/// Uniform double in [0, 1) from the generator's raw bits. Written out
/// explicitly (rather than via std::uniform_real_distribution) so that a
/// seed pins the exact same profile on every platform and standard library.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double parse_double(const std::string& token, const std::string& context) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || end != begin + token.size()) {
    throw std::invalid_argument(context + ": cannot parse number '" + token + "'");
  }
  return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string::size_type pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string::npos ? next : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace detail

/// Parse `t,wx,wy,wz` sample rows (strictly increasing t). Blank lines and
/// lines starting with '#' are skipped. Errors carry the 1-based line
/// number. `source` names the stream in error messages.
inline std::vector<RateSample> load_rate_samples(std::istream& in, const std::string& source) {
  std::vector<RateSample> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const std::string where = source + " line " + std::to_string(line_no);
    const auto fields = detail::split(line, ',');
    if (fields.size() != 4) {
      throw std::invalid_argument(where + ": expected 4 fields t,wx,wy,wz, got " +
                                  std::to_string(fields.size()));
    }
    RateSample s;
    s.t = detail::parse_double(fields[0], where);
    s.rate = {detail::parse_double(fields[1], where), detail::parse_double(fields[2], where),
              detail::parse_double(fields[3], where)};
    if (!samples.empty() && !(s.t > samples.back().t)) {
      throw std::invalid_argument(where + ": sample times must be strictly increasing");
    }
    samples.push_back(s);
  }
  if (samples.empty()) {
    throw std::invalid_argument(source + ": no rate samples found");
  }
  return samples;
}

/// Body angular velocity as a function of time.
class RateProfile {
 public:
  enum class Kind { Constant, Sinusoid, Tumble, Csv };

  static RateProfile constant(const Vec3& rate) {
    RateProfile p;
    p.kind_ = Kind::Constant;
    p.constant_ = rate;
    return p;
  }

  /// amplitude * sin(2 pi f t + phase), componentwise.
  static RateProfile sinusoid(const Vec3& amplitude, double frequency_hz, double phase_rad) {
    RateProfile p;
    p.kind_ = Kind::Sinusoid;
    p.amplitude_ = amplitude;
    p.frequency_hz_ = frequency_hz;
    p.phase_ = phase_rad;
    return p;
  }

  /// Band-limited pseudo-random tumble: per axis, the sum of five sinusoids
  /// at frequencies bandwidth*(k+1)/5 with seeded random phases, scaled so
  /// the expected |omega| root-mean-square equals rms_rad_s. Deterministic
  /// in the seed; the direction of omega varies continually, which is what
  /// drives an attitude across many patches.
  static RateProfile tumble(std::uint64_t seed, double bandwidth_hz, double rms_rad_s) {
    RateProfile p;
    p.kind_ = Kind::Tumble;
    std::mt19937_64 rng(seed);
    for (auto& axis_phases : p.tumble_phase_) {
      for (double& ph : axis_phases) {
        ph = 2.0 * std::numbers::pi * detail::uniform01(rng);
      }
    }
    for (std::size_t k = 0; k < kTumbleTerms; ++k) {
      p.tumble_freq_[k] = bandwidth_hz * static_cast<double>(k + 1) / kTumbleTerms;
    }
    // Five equal-amplitude terms per axis, three axes: amplitude A gives
    // E[|omega|^2] = 3 * 5 * A^2 / 2.
    p.tumble_amp_ = rms_rad_s * std::sqrt(2.0 / (3.0 * kTumbleTerms));
    return p;
  }

  static RateProfile from_samples(std::vector<RateSample> samples) {
    if (samples.empty()) throw std::invalid_argument("rate profile: no samples");
    RateProfile p;
    p.kind_ = Kind::Csv;
    p.samples_ = std::move(samples);
    return p;
  }

  static RateProfile from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open rate csv '" + path + "'");
    return from_samples(load_rate_samples(in, path));
  }

  /// Parse a profile description:
  ///   constant:x,y,z | sinusoid:ax,ay,az:f:phase | tumble:seed:bw:rms | csv:PATH
  static RateProfile parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    const std::string where = "profile '" + text + "'";
    if (kind == "constant") {
      return constant(parse_vec3(rest, where));
    }
    if (kind == "sinusoid") {
      const auto parts = detail::split(rest, ':');
      if (parts.size() != 3) {
        throw std::invalid_argument(where + ": expected sinusoid:ax,ay,az:f:phase");
      }
      return sinusoid(parse_vec3(parts[0], where), detail::parse_double(parts[1], where),
                      detail::parse_double(parts[2], where));
    }
    if (kind == "tumble") {
      const auto parts = detail::split(rest, ':');
      if (parts.size() != 3) {
        throw std::invalid_argument(where + ": expected tumble:seed:bandwidth:rms");
      }
      const double seed = detail::parse_double(parts[0], where);
      if (!(seed >= 0.0) || seed != std::floor(seed)) {
        throw std::invalid_argument(where + ": seed must be a non-negative integer");
      }
      return tumble(static_cast<std::uint64_t>(seed), detail::parse_double(parts[1], where),
                    detail::parse_double(parts[2], where));
    }
    if (kind == "csv") {
      if (rest.empty()) throw std::invalid_argument(where + ": expected csv:PATH");
      return from_csv_file(rest);
    }
    throw std::invalid_argument(where +
                                ": unknown kind (expected constant, sinusoid, tumble or csv)");
  }

  Vec3 operator()(double t) const {
    switch (kind_) {
      case Kind::Constant:
        return constant_;
      case Kind::Sinusoid:
        return amplitude_ * std::sin(2.0 * std::numbers::pi * frequency_hz_ * t + phase_);
      case Kind::Tumble: {
        std::array<double, 3> acc{};
        for (int a = 0; a < 3; ++a) {
          double s = 0.0;
          for (std::size_t k = 0; k < kTumbleTerms; ++k) {
            s += std::sin(2.0 * std::numbers::pi * tumble_freq_[k] * t + tumble_phase_[a][k]);
          }
          acc[a] = tumble_amp_ * s;
        }
        return {acc[0], acc[1], acc[2]};
      }
      case Kind::Csv: {
        // Zero-order hold: the most recent sample at or before t, clamped
        // to the first/last samples outside the covered range.
        auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                                   [](double v, const RateSample& s) { return v < s.t; });
        if (it == samples_.begin()) return samples_.front().rate;
        return (it - 1)->rate;
      }
    }
    return {};
  }

  Kind kind() const { return kind_; }
  bool is_constant() const { return kind_ == Kind::Constant; }
  const Vec3& constant_rate() const {
    if (!is_constant()) throw std::logic_error("rate profile is not constant");
    return constant_;
  }

 private:
  static constexpr std::size_t kTumbleTerms = 5;

  static Vec3 parse_vec3(const std::string& text, const std::string& where) {
    const auto parts = detail::split(text, ',');
    if (parts.size() != 3) {
      throw std::invalid_argument(where + ": expected three comma-separated components");
    }
    return {detail::parse_double(parts[0], where), detail::parse_double(parts[1], where),
            detail::parse_double(parts[2], where)};
  }

  Kind kind_ = Kind::Constant;
  Vec3 constant_{};
  Vec3 amplitude_{};
  double frequency_hz_ = 0.0;
  double phase_ = 0.0;
  double tumble_amp_ = 0.0;
  std::array<double, kTumbleTerms> tumble_freq_{};
  std::array<std::array<double, kTumbleTerms>, 3> tumble_phase_{};
  std::vector<RateSample> samples_;
};

}  // namespace patchrot
