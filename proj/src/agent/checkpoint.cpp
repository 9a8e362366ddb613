#include "kgqr/agent/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "kgqr/error.hpp"
#include "kgqr/tsv.hpp"

namespace kgqr::agent {

namespace {

constexpr char kMagic[8] = {'K', 'G', 'Q', 'R', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_string(std::ostream& out, const std::string& s) {
  put<std::uint64_t>(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

template <typename T>
T get(std::istream& in, const std::string& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
    throw ParseError(path + ": truncated checkpoint");
  }
  return v;
}

std::string get_string(std::istream& in, const std::string& path) {
  const auto n = get<std::uint64_t>(in, path);
  if (n > (1ULL << 32)) throw ParseError(path + ": corrupt string length");
  std::string s(n, '\0');
  if (n && !in.read(s.data(), static_cast<std::streamsize>(n))) {
    throw ParseError(path + ": truncated checkpoint");
  }
  return s;
}

CheckpointHeader read_header(std::istream& in, const std::string& path) {
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) {
    throw ParseError(path + ": not a checkpoint");
  }
  if (get<std::uint32_t>(in, path) != kVersion) throw ParseError(path + ": unsupported version");
  CheckpointHeader h;
  h.config_hash = get<std::uint64_t>(in, path);
  h.config_text = get_string(in, path);
  return h;
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open checkpoint " + path.string());
  return in;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void save_checkpoint(const std::filesystem::path& path, KgqrAgent& agent,
                     const std::string& config_text) {
  std::ostringstream out(std::ios::binary);
  out.write(kMagic, 8);
  put<std::uint32_t>(out, kVersion);
  put<std::uint64_t>(out, fnv1a64(config_text));
  put_string(out, config_text);
  auto params = agent.all_parameters();
  put<std::uint64_t>(out, params.size());
  for (const Parameter* p : params) {
    put_string(out, p->name);
    put<std::uint64_t>(out, p->value.rows());
    put<std::uint64_t>(out, p->value.cols());
    auto v = p->value.values();
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
  }
  write_file_atomic(path.string(), out.str());
}

CheckpointHeader read_checkpoint_header(const std::filesystem::path& path) {
  auto in = open(path);
  return read_header(in, path.string());
}

CheckpointHeader load_checkpoint(const std::filesystem::path& path, KgqrAgent& agent) {
  auto in = open(path);
  const std::string where = path.string();
  CheckpointHeader h = read_header(in, where);
  if (fnv1a64(h.config_text) != h.config_hash) {
    throw ParseError(where + ": config hash does not match embedded config");
  }
  auto params = agent.all_parameters();
  const auto count = get<std::uint64_t>(in, where);
  if (count != params.size()) {
    throw ParseError(where + ": holds " + std::to_string(count) + " tensors, agent has " +
                     std::to_string(params.size()));
  }
  // Read everything first so a bad file leaves the agent untouched.
  std::vector<Tensor> values;
  for (Parameter* p : params) {
    const std::string name = get_string(in, where);
    const auto rows = get<std::uint64_t>(in, where);
    const auto cols = get<std::uint64_t>(in, where);
    if (name != p->name || rows != p->value.rows() || cols != p->value.cols()) {
      throw ParseError(where + ": tensor " + name + " " + numerics::shape_string(rows, cols) +
                       " does not match " + p->name + " " + p->value.shape_string());
    }
    Tensor t(rows, cols);
    auto v = t.values();
    if (!in.read(reinterpret_cast<char*>(v.data()),
                 static_cast<std::streamsize>(v.size() * sizeof(double)))) {
      throw ParseError(where + ": truncated checkpoint");
    }
    values.push_back(std::move(t));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    params[i]->value = std::move(values[i]);
    params[i]->zero_grad();
  }
  agent.mark_updated();
  return h;
}

}  // namespace kgqr::agent
