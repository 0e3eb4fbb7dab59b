#include "favlab/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "favlab/error.hpp"
#include "favlab/rng.hpp"
#include "json.hpp"

namespace favlab {

using nlohmann::json;

std::string_view to_string(Shape shape) {
  return shape == Shape::disc ? "disc" : "square";
}

double SimilaritySystem::bounding_radius() const {
  return shape() == Shape::disc ? root_size_ : root_size_ * std::numbers::sqrt2;
}

SimilaritySystem build_system(std::vector<GeneratorMap> maps, std::string label,
                              double root_size) {
  if (maps.empty()) raise(ErrorKind::EmptySystem, "similarity system has no maps");
  if (!(root_size > 0.0) || !std::isfinite(root_size)) {
    raise(ErrorKind::InvalidMap, "root size must be positive and finite");
  }
  const Shape shape = maps.front().shape;
  const double ratio = maps.front().ratio;
  for (const auto& m : maps) {
    if (m.shape != shape) raise(ErrorKind::MixedShapes, "all maps must share one shape");
  }
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const auto& m = maps[i];
    if (!(m.ratio > 0.0 && m.ratio < 1.0)) {
      raise(ErrorKind::InvalidMap, "map " + std::to_string(i) + ": ratio must lie in (0, 1)");
    }
    if (m.ratio != ratio) {
      raise(ErrorKind::InvalidMap, "map " + std::to_string(i) + ": ratios must be equal");
    }
    if (!std::isfinite(m.center.real()) || !std::isfinite(m.center.imag())) {
      raise(ErrorKind::InvalidMap, "map " + std::to_string(i) + ": non-finite center");
    }
    const double reach =
        shape == Shape::disc
            ? std::abs(m.center) + m.ratio * root_size
            : std::max(std::abs(m.center.real()), std::abs(m.center.imag())) + m.ratio * root_size;
    if (reach > root_size + kContainmentTolerance) {
      std::ostringstream msg;
      msg << "map " << i << " leaves the root region (reach " << reach << " > " << root_size
          << ")";
      raise(ErrorKind::ContainmentViolation, msg.str());
    }
  }
  if (maps.size() < 2) raise(ErrorKind::InvalidMap, "a system needs at least two maps");

  SimilaritySystem s;
  s.maps_ = std::move(maps);
  s.label_ = std::move(label);
  s.root_size_ = root_size;
  return s;
}

namespace {

SimilaritySystem gasket() {
  std::vector<GeneratorMap> maps;
  for (int alpha = -1; alpha <= 1; ++alpha) {
    const double angle = std::numbers::pi * (0.5 + 2.0 * alpha / 3.0);
    maps.push_back({std::polar(1.0 / 3.0, angle), 1.0 / 3.0, Shape::disc});
  }
  return build_system(std::move(maps), "gasket");
}

SimilaritySystem corner4() {
  constexpr double c = 3.0 / 8.0;
  std::vector<GeneratorMap> maps = {
      {{-c, -c}, 0.25, Shape::square},
      {{c, -c}, 0.25, Shape::square},
      {{-c, c}, 0.25, Shape::square},
      {{c, c}, 0.25, Shape::square},
  };
  return build_system(std::move(maps), "corner4", 0.5);
}

SimilaritySystem random_system(std::size_t count, std::uint64_t seed, std::string label) {
  CounterRng rng(seed, 0x5EED);
  const double ratio = 1.0 / static_cast<double>(count);
  const double reach = 1.0 - ratio;
  std::vector<GeneratorMap> maps;
  for (std::size_t i = 0; i < count; ++i) {
    const double radius = reach * std::sqrt(rng.next_double());
    const double angle = 2.0 * std::numbers::pi * rng.next_double();
    maps.push_back({std::polar(radius, angle), ratio, Shape::disc});
  }
  return build_system(std::move(maps), std::move(label));
}

bool parse_unsigned(std::string_view text, std::uint64_t& out) {
  if (text.empty() || text.size() > 19) return false;
  out = 0;
  for (char ch : text) {
    if (ch < '0' || ch > '9') return false;
    out = out * 10 + static_cast<std::uint64_t>(ch - '0');
  }
  return true;
}

}  // namespace

SimilaritySystem preset(std::string_view name) {
  if (name == "gasket") return gasket();
  if (name == "corner4") return corner4();
  if (name.starts_with("random-")) {
    const auto rest = name.substr(7);
    const auto dash = rest.find('-');
    std::uint64_t count = 0;
    std::uint64_t seed = 0;
    if (dash != std::string_view::npos && parse_unsigned(rest.substr(0, dash), count) &&
        parse_unsigned(rest.substr(dash + 1), seed) && count >= 2 && count <= 64) {
      return random_system(static_cast<std::size_t>(count), seed, std::string(name));
    }
  }
  raise(ErrorKind::UnknownPreset, "unknown preset '" + std::string(name) + "'");
}

SimilaritySystem system_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    raise(ErrorKind::ParseError, std::string("system JSON: ") + e.what());
  }
  try {
    const std::string shape_name = doc.at("shape").get<std::string>();
    Shape shape;
    if (shape_name == "disc") {
      shape = Shape::disc;
    } else if (shape_name == "square") {
      shape = Shape::square;
    } else {
      raise(ErrorKind::ParseError, "system JSON: shape must be \"disc\" or \"square\"");
    }
    const double ratio = doc.at("ratio").get<double>();
    std::vector<GeneratorMap> maps;
    for (const auto& c : doc.at("centers")) {
      if (!c.is_array() || c.size() != 2) {
        raise(ErrorKind::ParseError, "system JSON: each center is [re, im]");
      }
      maps.push_back({{c[0].get<double>(), c[1].get<double>()}, ratio, shape});
    }
    const std::string label = doc.value("label", std::string("custom"));
    const double root = doc.value("root_size", 1.0);
    return build_system(std::move(maps), label, root);
  } catch (const json::exception& e) {
    raise(ErrorKind::ParseError, std::string("system JSON: ") + e.what());
  }
}

SimilaritySystem load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::IoError, "cannot open system file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return system_from_json(buf.str());
}

std::string system_to_json(const SimilaritySystem& system) {
  json doc = json::object();
  doc["label"] = system.label();
  doc["shape"] = std::string(to_string(system.shape()));
  doc["ratio"] = system.ratio();
  doc["root_size"] = system.root_size();
  json centers = json::array();
  for (const auto& m : system.maps()) centers.push_back({m.center.real(), m.center.imag()});
  doc["centers"] = centers;
  return doc.dump();
}

Complex piece_center(const SimilaritySystem& system, std::span<const std::size_t> word) {
  // Horner from the innermost map outwards: c_{w1} + r (c_{w2} + r (...)).
  Complex z{0.0, 0.0};
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    if (*it >= system.size()) raise(ErrorKind::InvalidArgument, "word letter out of range");
    z = system.center(*it) + system.ratio() * z;
  }
  return z;
}

double piece_size(const SimilaritySystem& system, int depth) {
  double s = system.root_size();
  for (int k = 0; k < depth; ++k) s *= system.ratio();
  return s;
}

std::uint64_t piece_count(const SimilaritySystem& system, int depth, std::uint64_t cap) {
  if (depth < 0) raise(ErrorKind::InvalidArgument, "depth must be non-negative");
  std::uint64_t count = 1;
  for (int k = 0; k < depth; ++k) {
    if (count > cap / system.size()) {
      raise(ErrorKind::EnumerationCapExceeded,
            "L^n = " + std::to_string(system.size()) + "^" + std::to_string(depth) +
                " exceeds the enumeration cap " + std::to_string(cap));
    }
    count *= system.size();
  }
  if (count > cap) raise(ErrorKind::EnumerationCapExceeded, "enumeration cap exceeded");
  return count;
}

PieceCursor::PieceCursor(const SimilaritySystem& system, int depth, std::uint64_t cap)
    : PieceCursor(system, depth, std::span<const std::size_t>{}, cap) {}

PieceCursor::PieceCursor(const SimilaritySystem& system, int depth,
                         std::span<const std::size_t> prefix, std::uint64_t cap)
    : system_(&system), depth_(depth), fixed_(prefix.size()) {
  if (prefix.size() > static_cast<std::size_t>(std::max(depth, 0))) {
    raise(ErrorKind::InvalidArgument, "prefix longer than depth");
  }
  piece_count(system, depth - static_cast<int>(prefix.size()), cap);
  size_ = piece_size(system, depth);
  word_.assign(static_cast<std::size_t>(depth), 0);
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (prefix[i] >= system.size()) raise(ErrorKind::InvalidArgument, "prefix letter out of range");
    word_[i] = prefix[i];
  }
  scale_.resize(static_cast<std::size_t>(depth) + 1);
  scale_[0] = 1.0;
  for (std::size_t k = 1; k < scale_.size(); ++k) scale_[k] = scale_[k - 1] * system.ratio();
  partial_.assign(static_cast<std::size_t>(depth) + 1, Complex{});
  rebuild_from(0);
}

void PieceCursor::rebuild_from(std::size_t position) {
  for (std::size_t k = position; k < word_.size(); ++k) {
    partial_[k + 1] = partial_[k] + scale_[k] * system_->center(word_[k]);
  }
}

std::optional<Piece> PieceCursor::next() {
  if (done_) return std::nullopt;
  if (started_) {
    // Odometer increment over the free positions [fixed_, depth_).
    std::size_t pos = word_.size();
    while (pos > fixed_) {
      --pos;
      if (++word_[pos] < system_->size()) {
        rebuild_from(pos);
        break;
      }
      word_[pos] = 0;
      if (pos == fixed_) {
        done_ = true;
        return std::nullopt;
      }
    }
    if (pos == word_.size() || word_.size() == fixed_) {
      done_ = true;
      return std::nullopt;
    }
  }
  started_ = true;
  return Piece{partial_.back(), size_, depth_};
}

void for_each_piece(const SimilaritySystem& system, int depth,
                    const std::function<void(const Piece&)>& fn, std::uint64_t cap) {
  PieceCursor cursor(system, depth, cap);
  while (auto piece = cursor.next()) fn(*piece);
}

}  // namespace favlab
