#include <algorithm>
#include <cmath>
#include <map>

#include "pmsgp/rng.hpp"
#include "pmsgp/scene.hpp"

namespace pmsgp {

BinaryMask oracle_segment(const LabelImage& labels, std::span<const Pixel> prompts) {
  BinaryMask mask(labels.width(), labels.height(), 0);
  std::vector<int> ids;
  std::map<int, int> votes;
  for (Pixel p : prompts) {
    if (!labels.in_bounds(p)) continue;
    ids.push_back(labels[p]);
    ++votes[labels[p]];
  }
  if (ids.empty()) return mask;
  int best_votes = 0;
  for (const auto& [id, n] : votes) best_votes = std::max(best_votes, n);
  // Prompt order breaks ties, so the first prompt wins whenever it is tied.
  int chosen = 0;
  for (int id : ids) {
    if (votes[id] == best_votes) {
      chosen = id;
      break;
    }
  }
  if (chosen == 0) return mask;
  auto src = labels.values();
  auto dst = mask.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] == chosen ? 1 : 0;
  return mask;
}

BinaryMask noisy_segment(const LabelImage& labels, std::span<const Pixel> prompts,
                         std::uint64_t seed, double corruption) {
  if (!(corruption >= 0.0 && corruption <= 1.0)) {
    throw Error(Errc::kInvalidArgument, "corruption must lie in [0, 1]");
  }
  BinaryMask mask = oracle_segment(labels, prompts);
  const auto pixels = mask_pixels(mask);
  const double effective = prompts.size() >= 4 ? 0.2 * corruption : corruption;
  const auto remove = static_cast<std::size_t>(std::llround(effective * static_cast<double>(pixels.size())));
  if (remove == 0 || pixels.empty()) return mask;

  Point2d centroid{0.0, 0.0};
  for (Pixel p : prompts) centroid = centroid + to_point(p);
  centroid = centroid * (1.0 / static_cast<double>(prompts.size()));

  Rng rng(derive_seed({seed, static_cast<std::uint64_t>(prompts.size())}));
  const EdgeSet edge = sobel_edges(mask);
  double far = -1.0;
  std::vector<Pixel> farthest;
  for (Pixel p : edge) {
    const double d = (to_point(p) - centroid).norm();
    if (d > far + 1e-12) {
      far = d;
      farthest.assign(1, p);
    } else if (std::fabs(d - far) <= 1e-12) {
      farthest.push_back(p);
    }
  }
  const Pixel bite = farthest[rng.below(farthest.size())];

  struct Ranked {
    long d2;
    std::uint64_t key;
    Pixel p;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(pixels.size());
  const std::uint64_t salt = rng.next();
  for (Pixel p : pixels) {
    const long dx = p.x - bite.x;
    const long dy = p.y - bite.y;
    const auto idx = static_cast<std::uint64_t>(p.y) * static_cast<std::uint64_t>(mask.width()) +
                     static_cast<std::uint64_t>(p.x);
    ranked.push_back({dx * dx + dy * dy, mix64(salt ^ idx), p});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.d2 != b.d2) return a.d2 < b.d2;
    return a.key < b.key;
  });
  for (std::size_t i = 0; i < remove && i < ranked.size(); ++i) mask[ranked[i].p] = 0;
  return mask;
}

}  // namespace pmsgp
