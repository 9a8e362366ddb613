#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kgqr::sim {

using UserId = std::uint32_t;
using ItemId = std::uint32_t;

struct Rating {
  UserId user = 0;
  ItemId item = 0;
  double value = 0.0;
  std::optional<std::int64_t> timestamp;
};

struct RatingsData {
  std::vector<Rating> ratings;
  std::vector<std::string> user_tokens;
  std::vector<std::string> item_tokens;  // catalog: item id -> token

  std::size_t user_count() const { return user_tokens.size(); }
  std::size_t item_count() const { return item_tokens.size(); }
};

// Parses `user\titem\trating[\ttimestamp]`. Item ids continue after
// `seed_items`, which occupy ids [0, seed_items.size()) so catalogs can be
// aligned with a link file. Ratings are ordered by (user, timestamp) when
// timestamps are present, file order otherwise.
RatingsData load_ratings(std::istream& in, const std::string& name,
                         std::span<const std::string> seed_items = {});
RatingsData load_ratings(const std::filesystem::path& path,
                         std::span<const std::string> seed_items = {});

void save_ratings(const std::filesystem::path& path, const RatingsData& data);

// Book-Crossing style: value becomes 1 when >= threshold, else 0.
void binarize(RatingsData& data, double threshold);
// Drops every rating of users with fewer than `min_interactions` ratings.
// User ids are kept (dropped users simply have no ratings).
std::size_t filter_min_interactions(RatingsData& data, std::size_t min_interactions);

// Users that still have at least one rating, ascending.
std::vector<UserId> active_users(const RatingsData& data);

}  // namespace kgqr::sim
