#include "gms/sigma.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gms {

std::string canonical_serialize(const std::vector<FinVector>& seq) {
  std::string out = std::to_string(seq.size()) + "|";
  for (const auto& f : seq) {
    out += std::to_string(f.support_size()) + "[";
    bool first = true;
    for (const auto& [i, v] : f) {
      if (!first) out += ",";
      first = false;
      out += std::to_string(i) + ":" + to_string(v);
    }
    out += "]";
  }
  return out;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void SigmaRegistry::insert(const std::string& key, int sigma) {
  if (sigma <= 0 || sigma % 4 != 0) throw InvalidArgument("sigma value must be a positive multiple of 4");
  if (entries_.count(key)) throw InvalidArgument("duplicate registry key " + key);
  if (used_.count(sigma)) throw InvalidArgument("sigma value " + std::to_string(sigma) + " assigned twice");
  entries_.emplace(key, sigma);
  used_.emplace(sigma, key);
}

int SigmaRegistry::assign(const std::vector<FinVector>& seq) {
  if (seq.empty()) throw InvalidArgument("sigma_assign: empty sequence");
  for (const auto& f : seq)
    if (f.is_zero()) throw InvalidArgument("sigma_assign: zero functional in sequence");
  if (!is_block_sequence(seq)) throw InvalidArgument("sigma_assign: sequence is not a block sequence");
  std::string key = canonical_serialize(seq);
  if (auto it = entries_.find(key); it != entries_.end()) return it->second;

  Integer start = 4;
  if (mode_ == ScheduleMode::conforming) {
    FinVector sum;
    for (const auto& f : seq) sum += f;
    Rational bound = Rational(4 * seq.back().max_support()) / norm_infty(sum);
    Integer ceil_bound = bound.get_num() / bound.get_den();
    if (ceil_bound * bound.get_den() < bound.get_num()) ceil_bound += 1;
    start = ((ceil_bound + 3) / 4) * 4;
    if (start < 4) start = 4;
  }
  if (!start.fits_sint_p()) throw CapacityError("sigma_assign: growth bound exceeds machine range");
  int sigma = static_cast<int>(start.get_si());
  while (used_.count(sigma)) sigma += 4;
  insert(key, sigma);
  return sigma;
}

int SigmaRegistry::lookup(const std::vector<FinVector>& seq) const {
  auto it = entries_.find(canonical_serialize(seq));
  return it == entries_.end() ? 0 : it->second;
}

std::string SigmaRegistry::to_text() const {
  std::string out = "mode\t" + to_string(mode_) + "\n";
  for (const auto& [key, sigma] : entries_)
    out += fnv1a_hex(key) + "\t" + key + "\t" + std::to_string(sigma) + "\n";
  return out;
}

SigmaRegistry SigmaRegistry::from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("mode\t", 0) != 0)
    throw ParseError("registry: missing mode header");
  SigmaRegistry reg(parse_mode(line.substr(5)));
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw ParseError("registry line " + std::to_string(lineno) + ": expected 3 fields");
    std::string hash = line.substr(0, t1);
    std::string key = line.substr(t1 + 1, t2 - t1 - 1);
    std::string value = line.substr(t2 + 1);
    if (fnv1a_hex(key) != hash) throw ParseError("registry line " + std::to_string(lineno) + ": hash mismatch");
    int sigma = 0;
    try {
      std::size_t used = 0;
      sigma = std::stoi(value, &used);
      if (used != value.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError("registry line " + std::to_string(lineno) + ": bad sigma value");
    }
    try {
      reg.insert(key, sigma);
    } catch (const InvalidArgument& e) {
      throw ParseError("registry line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return reg;
}

void SigmaRegistry::save(const std::filesystem::path& path) const {
  auto lock = path;
  lock += ".lock";
  std::FILE* lf = std::fopen(lock.c_str(), "wx");
  if (!lf) throw Error("registry: cannot acquire lock " + lock.string());
  std::fclose(lf);
  auto tmp = path;
  tmp += ".tmp";
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error("registry: cannot write " + tmp.string());
      out << to_text();
      if (!out) throw Error("registry: write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
  } catch (...) {
    std::filesystem::remove(lock);
    throw;
  }
  std::filesystem::remove(lock);
}

SigmaRegistry SigmaRegistry::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("registry: cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str());
}

}  // namespace gms
