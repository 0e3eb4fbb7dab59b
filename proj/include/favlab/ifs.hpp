#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace favlab {

using Complex = std::complex<double>;

enum class Shape { disc, square };

std::string_view to_string(Shape shape);

inline constexpr double kContainmentTolerance = 1e-9;
inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 26;

/// Homothety z -> center + ratio * z of the root region onto one child.
struct GeneratorMap {
  Complex center;
  double ratio = 0.5;
  Shape shape = Shape::disc;
};

/// A validated self-similar system. The root region is the disc of radius
/// root_size() (shape disc) or the axis-aligned square of half-side
/// root_size() (shape square), both centred at the origin.
class SimilaritySystem {
 public:
  const std::vector<GeneratorMap>& maps() const { return maps_; }
  std::size_t size() const { return maps_.size(); }
  double ratio() const { return maps_.front().ratio; }
  Shape shape() const { return maps_.front().shape; }
  double root_size() const { return root_size_; }
  const std::string& label() const { return label_; }
  const Complex& center(std::size_t letter) const { return maps_[letter].center; }

  /// Radius of the smallest origin-centred disc holding the root region.
  double bounding_radius() const;

 private:
  friend SimilaritySystem build_system(std::vector<GeneratorMap>, std::string, double);
  std::vector<GeneratorMap> maps_;
  std::string label_;
  double root_size_ = 1.0;
};

/// Validates and assembles a system. Throws ContainmentViolation, MixedShapes,
/// EmptySystem or InvalidMap.
SimilaritySystem build_system(std::vector<GeneratorMap> maps, std::string label = "custom",
                              double root_size = 1.0);

/// Compiled-in systems:
///  - "gasket":  3 discs, ratio 1/3, letter l <-> alpha = l - 1 in
///               (1/3) e^{i pi (1/2 + 2 alpha / 3)}; letter 1 is the top disc.
///  - "corner4": 4 squares, ratio 1/4, root [-1/2,1/2]^2, letters
///               (-,-), (+,-), (-,+), (+,+) at the corners.
///  - "random-L-seed": L discs of radius 1/L with centres drawn uniformly in
///               the disc of radius 1 - 1/L from a Philox stream keyed by seed.
SimilaritySystem preset(std::string_view name);

/// System definition JSON: {"label", "shape", "ratio", "centers": [[re, im], ...]}
/// plus the optional "root_size" (default 1).
SimilaritySystem system_from_json(std::string_view text);
SimilaritySystem load_system_file(const std::string& path);
std::string system_to_json(const SimilaritySystem& system);

struct Piece {
  Complex center;
  double size = 1.0;  // radius (disc) or half-side (square)
  int depth = 0;
};

/// Center of the piece addressed by `word`: the maps applied left to right to
/// the origin, i.e. sum_k ratio^(k-1) * center[word_k].
Complex piece_center(const SimilaritySystem& system, std::span<const std::size_t> word);

/// root_size * ratio^depth, computed by repeated multiplication.
double piece_size(const SimilaritySystem& system, int depth);

/// L^n, or EnumerationCapExceeded when above `cap`.
std::uint64_t piece_count(const SimilaritySystem& system, int depth,
                          std::uint64_t cap = kDefaultEnumerationCap);

/// Streaming lexicographic enumeration of the level-n pieces.
class PieceCursor {
 public:
  PieceCursor(const SimilaritySystem& system, int depth,
              std::uint64_t cap = kDefaultEnumerationCap);
  /// Restricts the stream to words starting with `prefix`.
  PieceCursor(const SimilaritySystem& system, int depth, std::span<const std::size_t> prefix,
              std::uint64_t cap = kDefaultEnumerationCap);

  std::optional<Piece> next();
  const std::vector<std::size_t>& word() const { return word_; }

 private:
  void rebuild_from(std::size_t position);

  const SimilaritySystem* system_;
  int depth_;
  std::size_t fixed_;
  double size_;
  std::vector<std::size_t> word_;
  std::vector<Complex> partial_;  // partial_[k] = center of word_[0..k)
  std::vector<double> scale_;     // ratio^k
  bool started_ = false;
  bool done_ = false;
};

void for_each_piece(const SimilaritySystem& system, int depth,
                    const std::function<void(const Piece&)>& fn,
                    std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace favlab
