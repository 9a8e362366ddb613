#include "kgqr/sim/ratings.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "kgqr/error.hpp"
#include "kgqr/tsv.hpp"

namespace kgqr::sim {

namespace {

double parse_double(const std::string& s, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != trim(s).size()) throw ParseError(where + ": bad number '" + s + "'");
  return v;
}

}  // namespace

RatingsData load_ratings(std::istream& in, const std::string& name,
                         std::span<const std::string> seed_items) {
  RatingsData data;
  std::unordered_map<std::string, UserId> users;
  std::unordered_map<std::string, ItemId> items;
  for (const auto& token : seed_items) {
    if (items.emplace(token, static_cast<ItemId>(data.item_tokens.size())).second) {
      data.item_tokens.push_back(token);
    }
  }
  bool any_timestamp = false;
  for_each_tsv_row(in, name, 3, 4, [&](const std::vector<std::string>& cols, std::size_t line) {
    const std::string where = name + ":" + std::to_string(line);
    Rating r;
    auto u = users.emplace(cols[0], static_cast<UserId>(data.user_tokens.size()));
    if (u.second) data.user_tokens.push_back(cols[0]);
    r.user = u.first->second;
    auto it = items.emplace(cols[1], static_cast<ItemId>(data.item_tokens.size()));
    if (it.second) data.item_tokens.push_back(cols[1]);
    r.item = it.first->second;
    r.value = parse_double(cols[2], where);
    if (cols.size() == 4 && !trim(cols[3]).empty()) {
      r.timestamp = static_cast<std::int64_t>(parse_double(cols[3], where));
      any_timestamp = true;
    }
    data.ratings.push_back(r);
  });
  if (any_timestamp) {
    std::stable_sort(data.ratings.begin(), data.ratings.end(),
                     [](const Rating& a, const Rating& b) {
                       if (a.user != b.user) return a.user < b.user;
                       return a.timestamp.value_or(0) < b.timestamp.value_or(0);
                     });
  } else {
    std::stable_sort(data.ratings.begin(), data.ratings.end(),
                     [](const Rating& a, const Rating& b) { return a.user < b.user; });
  }
  return data;
}

RatingsData load_ratings(const std::filesystem::path& path, std::span<const std::string> seed_items) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open ratings file " + path.string());
  return load_ratings(in, path.string(), seed_items);
}

void save_ratings(const std::filesystem::path& path, const RatingsData& data) {
  std::ostringstream os;
  char buf[32];
  for (const auto& r : data.ratings) {
    std::snprintf(buf, sizeof buf, "%.17g", r.value);
    os << data.user_tokens[r.user] << '\t' << data.item_tokens[r.item] << '\t' << buf;
    if (r.timestamp) os << '\t' << *r.timestamp;
    os << '\n';
  }
  write_file_atomic(path.string(), os.str());
}

void binarize(RatingsData& data, double threshold) {
  for (auto& r : data.ratings) r.value = r.value >= threshold ? 1.0 : 0.0;
}

std::size_t filter_min_interactions(RatingsData& data, std::size_t min_interactions) {
  std::vector<std::size_t> counts(data.user_count(), 0);
  for (const auto& r : data.ratings) ++counts[r.user];
  std::size_t dropped = 0;
  for (std::size_t c : counts) {
    if (c > 0 && c < min_interactions) ++dropped;
  }
  std::erase_if(data.ratings,
                [&](const Rating& r) { return counts[r.user] < min_interactions; });
  return dropped;
}

std::vector<UserId> active_users(const RatingsData& data) {
  std::vector<bool> seen(data.user_count(), false);
  for (const auto& r : data.ratings) seen[r.user] = true;
  std::vector<UserId> out;
  for (UserId u = 0; u < seen.size(); ++u) {
    if (seen[u]) out.push_back(u);
  }
  return out;
}

}  // namespace kgqr::sim
