#include "qstates/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>

#include "qstates/error.hpp"
#include "qstates/simd.hpp"

namespace qstates {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kCoarseFactor = 64;  // coarse window = T / 64
constexpr std::size_t kMaxCandidates = 64;
constexpr int kMaxPasses = 32;
constexpr double kHaarZero = 1e-14;

// Samples in structure-of-arrays layout with fixed quadrature weights.
struct Signal {
  std::vector<double> t, re, im, w;
  std::size_t size() const { return t.size(); }
  cplx transform(double omega) const { return simd::modulated_sum(t.data(), re.data(), im.data(), w.data(), size(), omega); }
};

Signal make_signal(std::span<const double> t, std::span<const cplx> f, double weight) {
  Signal s;
  s.t.assign(t.begin(), t.end());
  s.re.resize(f.size());
  s.im.resize(f.size());
  s.w.assign(f.size(), weight);
  for (std::size_t i = 0; i < f.size(); ++i) {
    s.re[i] = f[i].real();
    s.im[i] = f[i].imag();
  }
  return s;
}

// Central block |t| <= W of a symmetric midpoint grid, weights 1/count.
Signal central_block(std::span<const double> t, std::span<const cplx> f, double W) {
  const std::size_t n = t.size();
  std::size_t half = 0;
  while (half < n / 2 && t[n / 2 + half] < W) ++half;
  half = std::max<std::size_t>(half, 1);
  const std::size_t lo = n / 2 - half, count = 2 * half;
  return make_signal(t.subspan(lo, count), f.subspan(lo, count), 1.0 / static_cast<double>(count));
}

Signal coarse_block(std::span<const double> t, std::span<const cplx> f) {
  const double T = -t.front() + 0.5 * (t[1] - t[0]);
  return central_block(t, f, T / static_cast<double>(kCoarseFactor));
}

double golden_max(const std::function<double(double)>& g, double a, double b, double tol) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = g(x1), f2 = g(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = g(x1);
    }
  }
  return 0.5 * (a + b);
}

// Least-squares masses for fixed frequencies: G m = b with
// G_ab = mean e^{i(w_b - w_a) t}, b_a = mean f e^{-i w_a t}.
std::vector<cplx> fit_masses(const Signal& full, const Signal& ones, const std::vector<double>& freq) {
  const auto n = static_cast<Eigen::Index>(freq.size());
  Eigen::MatrixXcd G(n, n);
  Eigen::VectorXcd b(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    b[a] = full.transform(freq[static_cast<std::size_t>(a)]);
    for (Eigen::Index c = 0; c < n; ++c) {
      G(a, c) = a == c ? cplx{1.0, 0.0} : ones.transform(freq[static_cast<std::size_t>(a)] - freq[static_cast<std::size_t>(c)]);
    }
  }
  const Eigen::VectorXcd m = G.partialPivLu().solve(b);
  return {m.data(), m.data() + n};
}

bool is_flat(const DensityGrid& d) {
  const double peak = *std::max_element(d.value.begin(), d.value.end());
  if (!(peak > 0)) return false;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < d.value.size(); ++i) {
    if (d.value[i] > 0.5 * peak) idx.push_back(i);
  }
  if (idx.size() < 10) return false;
  // Central 80% of the support.
  const std::size_t skip = idx.size() / 10;
  double sum = 0, sq = 0;
  std::size_t cnt = 0;
  for (std::size_t i = skip; i + skip < idx.size(); ++i) {
    const double v = d.value[idx[i]];
    sum += v;
    sq += v * v;
    ++cnt;
  }
  const double mean = sum / static_cast<double>(cnt);
  const double var = std::max(0.0, sq / static_cast<double>(cnt) - mean * mean);
  return std::sqrt(var) < 0.05 * mean;
}

void check_window(double T, std::size_t N) {
  if (N < 4096 || N % 2 != 0) throw Error(ErrorCode::InvalidParameter, "spectral: N must be even and at least 4096");
  if (!(T >= 100.0)) throw Error(ErrorCode::InvalidParameter, "spectral: T must be at least 100");
}

}  // namespace

std::string_view to_string(SpectralClass c) noexcept {
  switch (c) {
    case SpectralClass::Atomic: return "atomic";
    case SpectralClass::UniformDensity: return "uniform_density";
    case SpectralClass::AbsolutelyContinuous: return "absolutely_continuous";
    case SpectralClass::HaarOnBohr: return "haar_on_bohr";
    case SpectralClass::Mixed: return "mixed";
  }
  return "unknown";
}

double DensityGrid::mass() const { return cumulative.empty() ? 0.0 : cumulative.back(); }

double DensityGrid::mass_between(double lo, double hi) const {
  if (frequency.size() < 2 || hi <= lo) return 0.0;
  auto cdf = [&](double x) {
    if (x <= frequency.front()) return 0.0;
    if (x >= frequency.back()) return cumulative.back();
    if (exact_cumulative) return exact_cumulative(x);
    const auto it = std::upper_bound(frequency.begin(), frequency.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - frequency.begin());
    const double u = (x - frequency[i - 1]) / (frequency[i] - frequency[i - 1]);
    return cumulative[i - 1] + u * (cumulative[i] - cumulative[i - 1]);
  };
  return cdf(hi) - cdf(lo);
}

std::vector<double> spectral_times(double T, std::size_t N) {
  std::vector<double> t(N);
  const double h = 2.0 * T / static_cast<double>(N);
  for (std::size_t i = 0; i < N; ++i) t[i] = -T + (static_cast<double>(i) + 0.5) * h;
  return t;
}

SpectralOptions options_for(const AlgebraElement& Z, SpectralOptions base) {
  if (Z.family == Family::SU2 && Z.norm() > 0) base.period = 2 * kPi / Z.norm();
  return base;
}

namespace {

double snapped_T(const SpectralOptions& o) {
  if (o.period > 0) return std::ceil(o.T / o.period - 1e-12) * o.period;
  return o.T;
}

std::vector<cplx> sample_state(const State& m, const AlgebraElement& Z, const std::vector<double>& t) {
  std::vector<cplx> f(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) f[i] = m(exp(Z * t[i]));
  return f;
}

}  // namespace

BohrMean bohr_atom(const State& m, const AlgebraElement& Z, double omega, double T, std::size_t N) {
  check_window(T, N);
  const std::vector<double> t = spectral_times(T, N);
  const std::vector<cplx> f = sample_state(m, Z, t);
  const Signal s = make_signal(t, f, 1.0 / static_cast<double>(N));
  return {s.transform(omega), kPi / T};
}

SpectralEstimate spectral_estimate_samples(const std::vector<double>& t, const std::vector<cplx>& f, cplx f0,
                                           const SpectralOptions& options) {
  const std::size_t N = t.size();
  if (f.size() != N || N < 4096 || N % 2 != 0) {
    throw Error(ErrorCode::InvalidParameter, "spectral: need an even sample count of at least 4096");
  }
  const double T = -t.front() + 0.5 * (t[1] - t[0]);
  const double h = t[1] - t[0];
  SpectralEstimate est;
  est.T = T;
  est.N = N;
  est.leakage_bound = kPi / T;

  const bool all_zero = std::all_of(f.begin(), f.end(), [](cplx v) { return std::abs(v) < kHaarZero; });
  if (all_zero && std::abs(f0 - 1.0) < 1e-12) {
    est.classification = SpectralClass::HaarOnBohr;
    est.total_mass_accounted = 1.0;
    return est;
  }

  const double threshold = options.tol.atom_leakage_factor * est.leakage_bound;
  const double band = 0.5 * kPi / h;
  const Signal full = make_signal(t, f, 1.0 / static_cast<double>(N));
  const Signal ones = make_signal(t, std::vector<cplx>(N, cplx{1.0, 0.0}), 1.0 / static_cast<double>(N));

  std::vector<double> freq, rejected;
  std::vector<cplx> masses;
  std::vector<cplx> residual = f;
  const double lattice = options.period > 0 ? kPi / options.period : 0.0;
  double half = 0.5 * T;
  if (options.period > 0) half = std::max(options.period, std::floor(half / options.period) * options.period);
  auto near_any = [&](const std::vector<double>& xs, double w) {
    return std::any_of(xs.begin(), xs.end(), [&](double x) { return std::fabs(x - w) < kPi / T; });
  };

  for (int pass = 0; pass < kMaxPasses; ++pass) {
    // Nested central windows Tc, 4Tc, 16Tc, ..., T for the zoom.
    std::vector<Signal> levels;
    std::vector<double> widths;
    for (double W = T / static_cast<double>(kCoarseFactor);; W = std::min(T, 4 * W)) {
      levels.push_back(central_block(t, residual, W));
      widths.push_back(W);
      if (W >= T) break;
    }
    const Signal half_block = central_block(t, residual, half);
    const Signal& full_res = levels.back();
    const Signal& coarse = levels.front();
    const double Tc = widths.front();
    const double dw = kPi / (2.0 * Tc);
    const auto M = static_cast<std::size_t>(std::ceil(2 * band / dw)) + 1;
    std::vector<double> P(M);
    for (std::size_t i = 0; i < M; ++i) P[i] = std::abs(coarse.transform(-band + static_cast<double>(i) * dw));
    std::vector<std::size_t> cand;
    for (std::size_t i = 0; i < M; ++i) {
      const double left = i > 0 ? P[i - 1] : -1.0, right = i + 1 < M ? P[i + 1] : -1.0;
      if (P[i] > 0.5 * threshold && P[i] >= left && P[i] >= right) cand.push_back(i);
    }
    std::sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) { return P[a] > P[b]; });
    if (cand.size() > kMaxCandidates) cand.resize(kMaxCandidates);

    auto refine = [&](double wc) -> std::optional<double> {
      double center = wc, spacing = dw;
      for (std::size_t l = 1; l < levels.size(); ++l) {
        const double step = kPi / (2.0 * widths[l]);
        const int reach = static_cast<int>(std::ceil(spacing / step));
        double best = center, bestv = -1;
        for (int k = -reach; k <= reach; ++k) {
          const double w = center + k * step;
          const double v = std::abs(levels[l].transform(w));
          if (v > bestv) bestv = v, best = w;
        }
        if (bestv < 0.5 * threshold) return std::nullopt;
        center = best;
        spacing = step;
      }
      auto modulus = [&](double w) { return std::abs(full_res.transform(w)); };
      double w = golden_max(modulus, center - spacing, center + spacing, 1e-12 * std::max(1.0, std::fabs(center)));
      if (lattice > 0) {
        const double snapped = std::round(w / lattice) * lattice;
        if (std::fabs(snapped - w) < kPi / (4 * T)) w = snapped;
      }
      const double vT = modulus(w);
      if (vT <= threshold) return std::nullopt;
      // An atom's Bohr mean does not depend on the window; an integrable
      // singularity of the density grows like sqrt(T).
      if (std::abs(half_block.transform(w)) > 1.2 * vT) return std::nullopt;
      return w;
    };

    std::optional<double> accepted;
    for (std::size_t ci : cand) {
      const double wc = -band + static_cast<double>(ci) * dw;
      if (near_any(freq, wc) || near_any(rejected, wc)) continue;
      accepted = refine(wc);
      if (accepted && (near_any(freq, *accepted) || near_any(rejected, *accepted))) accepted.reset();
      if (accepted) break;
    }
    if (!accepted) break;
    freq.push_back(*accepted);
    masses = fit_masses(full, ones, freq);
    // Drop atoms the joint fit does not support.
    for (;;) {
      std::size_t weakest = freq.size();
      for (std::size_t a = 0; a < freq.size(); ++a) {
        if (masses[a].real() <= threshold && (weakest == freq.size() || masses[a].real() < masses[weakest].real())) {
          weakest = a;
        }
      }
      if (weakest == freq.size()) break;
      rejected.push_back(freq[weakest]);
      freq.erase(freq.begin() + static_cast<std::ptrdiff_t>(weakest));
      masses = freq.empty() ? std::vector<cplx>{} : fit_masses(full, ones, freq);
    }
    for (std::size_t i = 0; i < N; ++i) {
      cplx v = f[i];
      for (std::size_t a = 0; a < freq.size(); ++a) v -= masses[a] * std::polar(1.0, freq[a] * t[i]);
      residual[i] = v;
    }
  }

  for (std::size_t a = 0; a < freq.size(); ++a) {
    est.atoms.push_back({freq[a], masses[a].real(), masses[a].imag()});
    est.atom_mass += masses[a].real();
  }
  std::sort(est.atoms.begin(), est.atoms.end(), [](const Atom& a, const Atom& b) { return a.frequency < b.frequency; });

  double res_max = 0;
  for (const auto& v : residual) res_max = std::max(res_max, std::abs(v));
  if (options.estimate_density && res_max > 1e-9) {
    // Support from a coarse windowed transform, then the fine grid.
    const Signal coarse = coarse_block(t, residual);
    const double Tc = -coarse.t.front() + 0.5 * h;
    auto windowed = [&](const std::vector<double>& tt, std::span<const double> re, std::span<const double> im,
                        double sigma) {
      Signal s;
      s.t = tt;
      s.re.assign(re.begin(), re.end());
      s.im.assign(im.begin(), im.end());
      s.w.resize(tt.size());
      for (std::size_t i = 0; i < tt.size(); ++i) s.w[i] = h / (2 * kPi) * std::exp(-0.5 * tt[i] * tt[i] / (sigma * sigma));
      return s;
    };
    const Signal cw = windowed(coarse.t, coarse.re, coarse.im, Tc / 6.0);
    const std::size_t CM = 2048;
    std::vector<double> cd(CM);
    double cmax = 0;
    for (std::size_t i = 0; i < CM; ++i) {
      const double w = -band + 2 * band * static_cast<double>(i) / static_cast<double>(CM - 1);
      cd[i] = cw.transform(w).real();
      cmax = std::max(cmax, cd[i]);
    }
    double lo = band, hi = -band;
    for (std::size_t i = 0; i < CM; ++i) {
      if (cd[i] > 1e-3 * cmax) {
        const double w = -band + 2 * band * static_cast<double>(i) / static_cast<double>(CM - 1);
        lo = std::min(lo, w);
        hi = std::max(hi, w);
      }
    }
    if (hi > lo) {
      const double pad = 0.1 * (hi - lo) + 12.0 / Tc;
      lo = std::max(-band, lo - pad);
      hi = std::min(band, hi + pad);
      std::vector<double> re(N), im(N);
      for (std::size_t i = 0; i < N; ++i) re[i] = residual[i].real(), im[i] = residual[i].imag();
      // Wide window: edge smoothing costs about 0.4 / (sigma k) of the mass.
      const Signal fw = windowed(t, re, im, T / 4.0);
      // Antiderivative in omega: the data r W / (i t), i.e. (im/t, -re/t).
      Signal anti = fw;
      for (std::size_t i = 0; i < N; ++i) {
        anti.re[i] = fw.im[i] / t[i];
        anti.im[i] = -fw.re[i] / t[i];
      }
      const double A0 = anti.transform(lo).real();
      DensityGrid d;
      const std::size_t P = std::max<std::size_t>(options.density_points, 3);
      for (std::size_t i = 0; i < P; ++i) {
        const double w = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(P - 1);
        d.frequency.push_back(w);
        d.value.push_back(fw.transform(w).real());
        d.cumulative.push_back(A0 - anti.transform(w).real());
      }
      d.exact_cumulative = [anti = std::make_shared<const Signal>(std::move(anti)), A0](double w) {
        return A0 - anti->transform(w).real();
      };
      est.density_mass = d.mass();
      est.density = std::move(d);
    }
  }
  est.total_mass_accounted = est.atom_mass + est.density_mass;

  const double unexplained = 1.0 - est.total_mass_accounted;
  if (unexplained > options.tol.mixed_residual) {
    est.classification = SpectralClass::Mixed;
  } else if (est.density_mass < 0.05) {
    est.classification = SpectralClass::Atomic;
  } else if (est.atom_mass < 0.05) {
    est.classification = is_flat(*est.density) ? SpectralClass::UniformDensity : SpectralClass::AbsolutelyContinuous;
  } else {
    est.classification = SpectralClass::Mixed;
  }
  return est;
}

SpectralEstimate spectral_estimate(const State& m, const AlgebraElement& Z, const SpectralOptions& options) {
  if (Z.family != m.family()) throw Error(ErrorCode::FamilyMismatch, "spectral: direction of another family");
  const double T = snapped_T(options);
  check_window(T, options.N);
  const std::vector<double> t = spectral_times(T, options.N);
  const std::vector<cplx> f = sample_state(m, Z, t);
  return spectral_estimate_samples(t, f, m(GroupElement::identity(m.family(), m.torus_dim())), options);
}

SpectralEstimate density_estimate(const State& m, const AlgebraElement& Z, double T, std::size_t N) {
  SpectralOptions o;
  o.T = T;
  o.N = N;
  o.estimate_density = true;
  return spectral_estimate(m, Z, o);
}

// ---------------------------------------------------------------- concentration

bool FrequencySet::contains(double omega, double eps) const {
  switch (kind) {
    case Kind::Interval: return omega >= lo - eps && omega <= hi + eps;
    case Kind::Points:
      return std::any_of(points.begin(), points.end(), [&](double p) { return std::fabs(omega - p) <= eps; });
    case Kind::Everything: return true;
  }
  return false;
}

ConcentrationReport concentration_check(const SpectralEstimate& est, const FrequencySet& set, const Tolerances& tol) {
  ConcentrationReport rep;
  rep.allowed = tol.concentration_mass + est.leakage_bound;
  const double eps = tol.concentration_eps;
  if (est.classification == SpectralClass::HaarOnBohr) {
    rep.mass_outside = set.kind == FrequencySet::Kind::Everything ? 0.0 : 1.0;
  } else {
    for (const auto& a : est.atoms) {
      if (!set.contains(a.frequency, eps)) rep.mass_outside += std::max(0.0, a.mass);
    }
    if (est.density) {
      double inside = 0;
      switch (set.kind) {
        case FrequencySet::Kind::Interval: inside = est.density->mass_between(set.lo - eps, set.hi + eps); break;
        case FrequencySet::Kind::Points:
          for (double p : set.points) inside += est.density->mass_between(p - eps, p + eps);
          break;
        case FrequencySet::Kind::Everything: inside = est.density_mass; break;
      }
      rep.mass_outside += std::max(0.0, est.density_mass - inside);
    }
  }
  rep.pass = rep.mass_outside <= rep.allowed;
  return rep;
}

// ---------------------------------------------------------------- two parameters

SpectralEstimate2 spectral_estimate_2d(const State& m, const AlgebraElement& Z1, const AlgebraElement& Z2,
                                       const SpectralOptions2& options) {
  const std::array<AlgebraElement, 2> pair{Z1, Z2};
  if (!commuting(pair)) throw Error(ErrorCode::NonCommuting, "spectral_estimate_2d: directions do not commute");
  if (options.grid < 16 || options.grid % 2 != 0 || !(options.T > 0)) {
    throw Error(ErrorCode::InvalidParameter, "spectral_estimate_2d: bad tensor grid");
  }
  SpectralEstimate2 est;
  est.axis[0] = spectral_estimate(m, Z1, options.line);
  est.axis[1] = spectral_estimate(m, Z2, options.line);

  const std::vector<double> s = spectral_times(options.T, options.grid);
  const std::size_t G = s.size();
  std::vector<cplx> f(G * G);
  bool zero = true;
  for (std::size_t i = 0; i < G; ++i) {
    for (std::size_t j = 0; j < G; ++j) {
      f[i * G + j] = m(exp(Z1 * s[i] + Z2 * s[j]));
      zero = zero && std::abs(f[i * G + j]) < kHaarZero;
    }
  }
  const cplx f0 = m(GroupElement::identity(m.family(), m.torus_dim()));

  if (zero && std::abs(f0 - 1.0) < 1e-12) {
    est.classification = SpectralClass::HaarOnBohr;
  } else {
    const double thr = options.line.tol.atom_leakage_factor * kPi / options.T;
    double total = 0;
    for (const auto& a : est.axis[0].atoms) {
      for (const auto& b : est.axis[1].atoms) {
        cplx acc{};
        for (std::size_t i = 0; i < G; ++i) {
          for (std::size_t j = 0; j < G; ++j) acc += f[i * G + j] * std::polar(1.0, -(a.frequency * s[i] + b.frequency * s[j]));
        }
        acc /= static_cast<double>(G * G);
        if (acc.real() > thr) {
          est.atoms.push_back({{a.frequency, b.frequency}, acc.real()});
          total += acc.real();
        }
      }
    }
    if (total >= 1.0 - options.line.tol.mixed_residual) {
      est.classification = SpectralClass::Atomic;
    } else if (est.atoms.empty() && est.axis[0].classification == est.axis[1].classification) {
      est.classification = est.axis[0].classification;
    } else {
      est.classification = SpectralClass::Mixed;
    }
  }

  Rng rng(options.seed);
  est.consistent = true;
  for (std::size_t d = 0; d < options.diagonals; ++d) {
    DiagonalCheck dc;
    dc.angle = uniform(rng, 0.0, kPi);
    const double c = std::cos(dc.angle), sn = std::sin(dc.angle);
    dc.estimate = spectral_estimate(m, Z1 * c + Z2 * sn, options.line);
    if (est.classification == SpectralClass::Atomic) {
      // Projected atoms, merged where projections coincide.
      std::vector<std::pair<double, double>> proj;
      for (const auto& a : est.atoms) proj.emplace_back(c * a.frequency[0] + sn * a.frequency[1], a.mass);
      std::sort(proj.begin(), proj.end());
      std::vector<std::pair<double, double>> merged;
      for (const auto& p : proj) {
        if (!merged.empty() && std::fabs(merged.back().first - p.first) < kPi / dc.estimate.T) {
          merged.back().second += p.second;
        } else {
          merged.push_back(p);
        }
      }
      dc.consistent = dc.estimate.atoms.size() == merged.size();
      for (std::size_t i = 0; dc.consistent && i < merged.size(); ++i) {
        dc.consistent = std::fabs(dc.estimate.atoms[i].frequency - merged[i].first) < 1e-6 &&
                        std::fabs(dc.estimate.atoms[i].mass - merged[i].second) < 1e-3;
      }
    } else {
      dc.consistent = dc.estimate.classification == est.classification;
    }
    est.consistent = est.consistent && dc.consistent;
    est.diagonals.push_back(std::move(dc));
  }
  return est;
}

}  // namespace qstates
