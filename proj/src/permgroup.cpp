#include "segcs/permgroup.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>

#include "segcs/error.hpp"

namespace segcs {

PermutationSequence::PermutationSequence(std::vector<int> elements) : elements_(std::move(elements)) {
  const int m_o = static_cast<int>(elements_.size());
  if (m_o < 1) throw Error(Errc::invalid_sequence, "sequence must have at least one element");
  std::vector<bool> seen(static_cast<std::size_t>(m_o) + 1, false);
  for (int v : elements_) {
    if (v < 1 || v > m_o || seen[static_cast<std::size_t>(v)]) {
      throw Error(Errc::invalid_sequence, "not a permutation of 1.." + std::to_string(m_o));
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

PermutationSequence PermutationSequence::identity(int m_o) {
  if (m_o < 1) throw Error(Errc::invalid_sequence, "m_o must be >= 1");
  std::vector<int> e(static_cast<std::size_t>(m_o));
  std::iota(e.begin(), e.end(), 1);
  return PermutationSequence(std::move(e));
}

PermutationSequence PermutationSequence::parse(std::string_view text) {
  std::vector<int> values;
  while (true) {
    const auto comma = text.find(',');
    auto token = text.substr(0, comma);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && (token.back() == ' ' || token.back() == '\r')) token.remove_suffix(1);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
      throw Error(Errc::parse, "bad sequence element '" + std::string(token) + "'");
    }
    values.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return PermutationSequence(std::move(values));
}

PermutationSequence PermutationSequence::cyclic_shift() const {
  std::vector<int> shifted = elements_;
  std::rotate(shifted.rbegin(), shifted.rbegin() + 1, shifted.rend());
  return PermutationSequence(std::move(shifted));
}

std::string PermutationSequence::to_string() const {
  std::string out;
  for (std::size_t k = 0; k < elements_.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(elements_[k]);
  }
  return out;
}

ConstantSequence::ConstantSequence(int value, int m_o) : value_(value), m_o_(m_o) {
  if (m_o < 1 || value < 1 || value > m_o) {
    throw Error(Errc::invalid_sequence, "constant sequence value must lie in 1..m_o");
  }
}

std::vector<PermutationSequence> GroupFamily::all_sequences() const {
  std::vector<PermutationSequence> out;
  for (const auto& g : groups) out.insert(out.end(), g.members.begin(), g.members.end());
  return out;
}

int map_mod(long long x, int m) {
  if (m < 1) throw Error(Errc::domain, "modulus must be >= 1");
  long long r = (x - 1) % m;
  if (r < 0) r += m;
  return static_cast<int>(r) + 1;
}

bool is_prime(int value) {
  if (value < 2) return false;
  for (int d = 2; static_cast<long long>(d) * d <= value; ++d) {
    if (value % d == 0) return false;
  }
  return true;
}

SequenceGroup cyclic_shift_group(const PermutationSequence& seed, int group_id) {
  SequenceGroup group{group_id, seed, {seed}};
  group.members.reserve(static_cast<std::size_t>(seed.m_o()));
  for (int shift = 1; shift < seed.m_o(); ++shift) group.members.push_back(group.members.back().cyclic_shift());
  return group;
}

std::vector<SequenceGroup> cyclic_grouping(int m_o) {
  if (m_o < 1) throw Error(Errc::domain, "m_o must be >= 1");
  if (m_o > kEnumerationCap) {
    throw Error(Errc::cap_exceeded, "full grouping enumerates (m_o-1)! groups; m_o = " + std::to_string(m_o) +
                                        " exceeds the cap of " + std::to_string(kEnumerationCap));
  }
  // Seeds: every permutation with 1 in front, in lexicographic order of the tail.
  std::vector<int> tail(static_cast<std::size_t>(m_o - 1));
  std::iota(tail.begin(), tail.end(), 2);
  std::vector<SequenceGroup> groups;
  int id = 1;
  do {
    std::vector<int> seed{1};
    seed.insert(seed.end(), tail.begin(), tail.end());
    groups.push_back(cyclic_shift_group(PermutationSequence(std::move(seed)), id++));
  } while (std::next_permutation(tail.begin(), tail.end()));
  return groups;
}

GroupFamily congruence_groups(int m_o, int alpha) {
  if (!is_prime(m_o)) throw Error(Errc::not_prime, "m_o = " + std::to_string(m_o) + " is not prime");
  if (alpha < 1 || alpha > m_o - 1) {
    throw Error(Errc::alpha_out_of_range,
                "alpha = " + std::to_string(alpha) + " must lie in 1.." + std::to_string(m_o - 1));
  }
  GroupFamily family{m_o, alpha, Construction::congruence, {}};
  for (int i = 1; i <= alpha; ++i) {
    std::vector<PermutationSequence> members;
    for (int j = 1; j <= m_o; ++j) {
      std::vector<int> e(static_cast<std::size_t>(m_o));
      for (int k = 1; k <= m_o; ++k) {
        e[static_cast<std::size_t>(k - 1)] = map_mod(j + static_cast<long long>(k - 1) * i, m_o);
      }
      members.emplace_back(std::move(e));
    }
    family.groups.push_back(SequenceGroup{i, members.front(), std::move(members)});
  }
  return family;
}

namespace {

template <typename A, typename B>
int count_matches(const A& a, const B& b) {
  if (a.m_o() != b.m_o()) {
    throw Error(Errc::dimension_mismatch,
                "sequences of length " + std::to_string(a.m_o()) + " and " + std::to_string(b.m_o()));
  }
  int count = 0;
  for (std::size_t k = 0; k < static_cast<std::size_t>(a.m_o()); ++k) count += a[k] == b[k] ? 1 : 0;
  return count;
}

}  // namespace

int correlation_count(const PermutationSequence& a, const PermutationSequence& b) { return count_matches(a, b); }
int correlation_count(const PermutationSequence& a, const ConstantSequence& b) { return count_matches(a, b); }
int correlation_count(const ConstantSequence& a, const PermutationSequence& b) { return count_matches(a, b); }
int correlation_count(const ConstantSequence& a, const ConstantSequence& b) { return count_matches(a, b); }

void write_groups(std::ostream& out, std::span<const SequenceGroup> groups) {
  for (const auto& g : groups) {
    out << "# group " << g.group_id << '\n';
    for (const auto& s : g.members) out << s.to_string() << '\n';
  }
}

std::vector<SequenceGroup> read_groups(std::istream& in) {
  std::vector<SequenceGroup> groups;
  std::vector<PermutationSequence> members;
  int id = 0;
  bool open = false;
  auto flush = [&] {
    if (!open) return;
    if (members.empty()) throw Error(Errc::parse, "group " + std::to_string(id) + " has no members");
    groups.push_back(SequenceGroup{id, members.front(), std::move(members)});
    members.clear();
  };
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# group ", 0) == 0) {
      flush();
      const std::string_view digits = std::string_view(line).substr(8);
      const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), id);
      if (ec != std::errc() || ptr != digits.data() + digits.size()) throw Error(Errc::parse, "bad header: " + line);
      open = true;
      continue;
    }
    if (line.front() == '#') continue;
    if (!open) throw Error(Errc::parse, "sequence before the first group header");
    members.push_back(PermutationSequence::parse(line));
  }
  flush();
  return groups;
}

}  // namespace segcs
