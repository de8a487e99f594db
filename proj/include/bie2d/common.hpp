#pragma once

#include <cstdint>
#include <cmath>
#include <string>
#include <string_view>
#include <thread>
#include <vector>
#include <functional>
#include <stdexcept>

namespace bie2d {

inline constexpr const char* library_version = "1.0.0";

inline constexpr double pi = 3.141592653589793238462643383279502884;

// ---------------------------------------------------------------------------
// Small fixed-size vector/matrix types for plane geometry.
// ---------------------------------------------------------------------------

struct Vec2 {
  double x = 0, y = 0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& b) const { return {x + b.x, y + b.y}; }
  Vec2 operator-(const Vec2& b) const { return {x - b.x, y - b.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(const Vec2& b) { x += b.x; y += b.y; return *this; }
  Vec2& operator-=(const Vec2& b) { x -= b.x; y -= b.y; return *this; }
  Vec2 operator-() const { return {-x, -y}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm2(const Vec2& a) { return a.x * a.x + a.y * a.y; }
inline double norm(const Vec2& a) { return std::sqrt(norm2(a)); }

// 90-degree counterclockwise rotation, x^perp = (-x2, x1).
inline Vec2 perp(const Vec2& a) { return {-a.y, a.x}; }

struct Mat2 {
  // Row-major 2x2 matrix.
  double a11 = 0, a12 = 0, a21 = 0, a22 = 0;

  Vec2 operator*(const Vec2& v) const {
    return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
  }
  Mat2 operator+(const Mat2& b) const {
    return {a11 + b.a11, a12 + b.a12, a21 + b.a21, a22 + b.a22};
  }
  Mat2 operator*(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }
};

inline Mat2 operator*(double s, const Mat2& m) { return m * s; }

inline Mat2 outer(const Vec2& a, const Vec2& b) {
  return {a.x * b.x, a.x * b.y, a.y * b.x, a.y * b.y};
}

// ---------------------------------------------------------------------------
// Deterministic parallel loop.
//
// The range [begin, end) is cut into contiguous chunks, one per worker.  Each
// index is processed independently, so results are bitwise identical for any
// worker count.  n_threads <= 1 runs inline.
// ---------------------------------------------------------------------------

inline void parallel_for(std::int64_t begin, std::int64_t end,
                         const std::function<void(std::int64_t)>& body,
                         int n_threads = 0) {
  if (n_threads <= 0) n_threads = (int)std::thread::hardware_concurrency();
  if (n_threads < 1) n_threads = 1;
  const std::int64_t n = end - begin;
  if (n <= 0) return;
  if (n_threads == 1 || n < 2 * n_threads) {
    for (std::int64_t i = begin; i < end; i++) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  const std::int64_t chunk = (n + n_threads - 1) / n_threads;
  for (int t = 0; t < n_threads; t++) {
    const std::int64_t lo = begin + t * chunk;
    const std::int64_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::int64_t i = lo; i < hi; i++) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

// FNV-1a 64-bit hash, used to stamp reports with a config checksum.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

} // namespace bie2d
