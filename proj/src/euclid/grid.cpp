#include "bgt/euclid.hpp"

#include <fftw3.h>

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <mutex>

namespace bgt::euclid {

static_assert(std::endian::native == std::endian::little, "binary container assumes little-endian");

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void transform(const std::vector<int>& res, std::vector<Complex>& data, int sign) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft(static_cast<int>(res.size()), res.data(), buf, buf, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan);
}

bool power_of_two(int r) { return r > 0 && (r & (r - 1)) == 0; }

template <class T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw Error(ErrorKind::invalid_argument, "truncated grid container");
  return v;
}

}  // namespace

GridFunction::GridFunction(Vec c, Vec h, std::vector<int> r, std::size_t budget)
    : center(std::move(c)), half(std::move(h)), res(std::move(r)) {
  if (res.empty() || static_cast<int>(res.size()) > kMaxDim ||
      center.size() != static_cast<Eigen::Index>(res.size()) || half.size() != center.size())
    throw Error(ErrorKind::invalid_argument, "grid dimension mismatch");
  std::size_t total = 1;
  for (size_t d = 0; d < res.size(); ++d) {
    if (res[d] < 8 || !power_of_two(res[d]))
      throw Error(ErrorKind::invalid_argument, "grid resolution must be a power of two >= 8");
    if (!(half(static_cast<Eigen::Index>(d)) > 0.0))
      throw Error(ErrorKind::invalid_argument, "grid half-width must be positive");
    total *= static_cast<std::size_t>(res[d]);
  }
  if (total > budget)
    throw Error(ErrorKind::budget_exhausted,
                std::to_string(total) + " samples exceed the budget of " + std::to_string(budget));
  values.assign(total, Complex(0.0, 0.0));
}

double GridFunction::cell_volume() const {
  double v = 1.0;
  for (int d = 0; d < dim(); ++d) v *= spacing(d);
  return v;
}

Vec GridFunction::point(std::size_t flat) const {
  Vec x(dim());
  for (int d = dim() - 1; d >= 0; --d) {
    const auto r = static_cast<std::size_t>(res[static_cast<size_t>(d)]);
    x(d) = node(d, static_cast<int>(flat % r));
    flat /= r;
  }
  return x;
}

std::size_t GridFunction::flat_index(const std::vector<int>& idx) const {
  std::size_t flat = 0;
  for (int d = 0; d < dim(); ++d)
    flat = flat * static_cast<std::size_t>(res[static_cast<size_t>(d)]) +
           static_cast<std::size_t>(idx[static_cast<size_t>(d)]);
  return flat;
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (const Complex& v : values) m = std::max(m, std::abs(v));
  return m;
}

GridFunction GridFunction::sample(const Vec& center, const Vec& half, const std::vector<int>& res,
                                  const std::function<Complex(const Vec&)>& f, std::size_t budget) {
  GridFunction g(center, half, res, budget);
  for (std::size_t i = 0; i < g.size(); ++i) g.values[i] = f(g.point(i));
  return g;
}

int signed_mode(int i, int res) { return i < res / 2 ? i : i - res; }

double frequency(const GridFunction& f, int d, int m) {
  return 2.0 * M_PI * m / (2.0 * f.half(d));
}

std::vector<Complex> forward_fft(const GridFunction& f) {
  std::vector<Complex> out = f.values;
  transform(f.res, out, FFTW_FORWARD);
  return out;
}

GridFunction inverse_fft(const GridFunction& like, std::vector<Complex> spectrum) {
  transform(like.res, spectrum, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(spectrum.size());
  GridFunction g = like;
  for (std::size_t i = 0; i < spectrum.size(); ++i) g.values[i] = spectrum[i] * scale;
  return g;
}

std::vector<double> squared_frequencies(const GridFunction& f) {
  std::vector<double> out(f.size());
  const int n = f.dim();
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    std::size_t r = flat;
    double s = 0.0;
    for (int d = n - 1; d >= 0; --d) {
      const int res = f.res[static_cast<size_t>(d)];
      const double xi = frequency(f, d, signed_mode(static_cast<int>(r % static_cast<size_t>(res)), res));
      s += xi * xi;
      r /= static_cast<size_t>(res);
    }
    out[flat] = s;
  }
  return out;
}

void check_decay(const GridFunction& f, double tol) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Vec x = f.point(i);
    bool shell = false;
    for (int d = 0; d < f.dim(); ++d)
      if (std::abs(x(d) - f.center(d)) > 0.9 * f.half(d)) shell = true;
    if (shell && std::abs(f.values[i]) >= tol)
      throw Error(ErrorKind::decay_violation,
                  "|f| = " + std::to_string(std::abs(f.values[i])) + " on the outer shell of the box");
  }
}

void check_aliasing(const GridFunction& f, const std::vector<Complex>& spectrum, double fraction) {
  double total = 0.0, top = 0.0;
  const int n = f.dim();
  for (std::size_t flat = 0; flat < spectrum.size(); ++flat) {
    const double e = std::norm(spectrum[flat]);
    total += e;
    std::size_t r = flat;
    double level = 0.0;
    for (int d = n - 1; d >= 0; --d) {
      const int res = f.res[static_cast<size_t>(d)];
      const int m = signed_mode(static_cast<int>(r % static_cast<size_t>(res)), res);
      level = std::max(level, std::abs(m) / (0.5 * res));
      r /= static_cast<size_t>(res);
    }
    if (level > 0.9) top += e;
  }
  if (total > 0.0 && top > fraction * total)
    throw Error(ErrorKind::aliasing_suspected,
                "top-band energy fraction " + std::to_string(top / total));
}

GridFunction upsample(const GridFunction& f, int factor) {
  if (factor < 1 || !power_of_two(factor))
    throw Error(ErrorKind::invalid_argument, "upsampling factor must be a power of two");
  std::vector<int> res = f.res;
  for (int& r : res) r *= factor;
  GridFunction g(f.center, f.half, res, std::numeric_limits<std::size_t>::max());
  const std::vector<Complex> spec = forward_fft(f);
  std::vector<Complex> big(g.size(), Complex(0.0, 0.0));
  const double scale = static_cast<double>(g.size()) / static_cast<double>(f.size());
  const int n = f.dim();
  std::vector<int> idx(static_cast<size_t>(n));
  for (std::size_t flat = 0; flat < spec.size(); ++flat) {
    std::size_t r = flat;
    for (int d = n - 1; d >= 0; --d) {
      const int fr = f.res[static_cast<size_t>(d)];
      const int m = signed_mode(static_cast<int>(r % static_cast<size_t>(fr)), fr);
      const int gr = res[static_cast<size_t>(d)];
      idx[static_cast<size_t>(d)] = m < 0 ? m + gr : m;
      r /= static_cast<size_t>(fr);
    }
    big[g.flat_index(idx)] = spec[flat] * scale;
  }
  return inverse_fft(g, std::move(big));
}

Complex interpolate(const GridFunction& f, const Vec& x) {
  const int n = f.dim();
  std::vector<int> start(static_cast<size_t>(n));
  std::vector<std::array<double, 8>> w(static_cast<size_t>(n));
  for (int d = 0; d < n; ++d) {
    const double u = (x(d) - (f.center(d) - f.half(d))) / f.spacing(d);
    const int res = f.res[static_cast<size_t>(d)];
    if (!(u >= 0.0 && u <= res - 1)) return Complex(0.0, 0.0);
    const int i0 = static_cast<int>(std::floor(u)) - 3;
    start[static_cast<size_t>(d)] = i0;
    for (int k = 0; k < 8; ++k) {
      double wk = 1.0;
      for (int m = 0; m < 8; ++m)
        if (m != k) wk *= (u - (i0 + m)) / static_cast<double>(k - m);
      w[static_cast<size_t>(d)][static_cast<size_t>(k)] = wk;
    }
  }
  Complex acc(0.0, 0.0);
  std::vector<int> idx(static_cast<size_t>(n));
  for (int g = 0; g < (1 << (3 * n)); ++g) {
    double weight = 1.0;
    bool inside = true;
    for (int d = 0, r = g; d < n; ++d, r >>= 3) {
      const int k = r & 7;
      const int i = start[static_cast<size_t>(d)] + k;
      if (i < 0 || i >= f.res[static_cast<size_t>(d)]) inside = false;
      idx[static_cast<size_t>(d)] = i;
      weight *= w[static_cast<size_t>(d)][static_cast<size_t>(k)];
    }
    if (inside && weight != 0.0) acc += weight * f.values[f.flat_index(idx)];
  }
  return acc;
}

void write_binary(const GridFunction& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::invalid_argument, "cannot open " + path);
  os.write("BGTG", 4);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.dim()));
  for (int d = 0; d < f.dim(); ++d) put<double>(os, f.center(d));
  for (int d = 0; d < f.dim(); ++d) put<double>(os, f.half(d));
  for (int r : f.res) put<std::uint32_t>(os, static_cast<std::uint32_t>(r));
  for (const Complex& v : f.values) {
    put<double>(os, v.real());
    put<double>(os, v.imag());
  }
}

GridFunction read_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::invalid_argument, "cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != "BGTG")
    throw Error(ErrorKind::invalid_argument, path + " is not a grid container");
  const auto n = static_cast<int>(get<std::uint32_t>(is));
  if (n < 1 || n > kMaxDim) throw Error(ErrorKind::invalid_argument, "bad grid dimension");
  Vec c(n), h(n);
  for (int d = 0; d < n; ++d) c(d) = get<double>(is);
  for (int d = 0; d < n; ++d) h(d) = get<double>(is);
  std::vector<int> res(static_cast<size_t>(n));
  for (int& r : res) r = static_cast<int>(get<std::uint32_t>(is));
  GridFunction g(c, h, res, std::numeric_limits<std::size_t>::max());
  for (Complex& v : g.values) {
    const double re = get<double>(is);
    const double im = get<double>(is);
    v = Complex(re, im);
  }
  return g;
}

void write_csv(const GridFunction& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::invalid_argument, "cannot open " + path);
  for (int d = 0; d < f.dim(); ++d) os << 'x' << d << ',';
  os << "re,im\n" << std::setprecision(17);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Vec x = f.point(i);
    for (int d = 0; d < f.dim(); ++d) os << x(d) << ',';
    os << f.values[i].real() << ',' << f.values[i].imag() << '\n';
  }
}

}  // namespace bgt::euclid
