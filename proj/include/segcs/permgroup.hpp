#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace segcs {

/// Segment-source arrangement of one extended row: position k (0-based) holds
/// the 1-based index of the BMI whose k-th sub-sample the row reuses.
/// Always a permutation of (1, ..., m_o).
class PermutationSequence {
 public:
  explicit PermutationSequence(std::vector<int> elements);

  static PermutationSequence identity(int m_o);
  static PermutationSequence parse(std::string_view text);

  int m_o() const noexcept { return static_cast<int>(elements_.size()); }
  int operator[](std::size_t position) const { return elements_[position]; }
  std::span<const int> elements() const noexcept { return elements_; }

  /// Moves the final entry to the front and every other entry one position right.
  PermutationSequence cyclic_shift() const;

  /// Comma-separated 1-based values, e.g. "2,3,1".
  std::string to_string() const;

  friend bool operator==(const PermutationSequence&, const PermutationSequence&) = default;
  friend auto operator<=>(const PermutationSequence&, const PermutationSequence&) = default;

 private:
  std::vector<int> elements_;
};

/// An original row of Phi_o viewed as a sequence: all m_o segments come from BMI `value`.
class ConstantSequence {
 public:
  ConstantSequence(int value, int m_o);

  int value() const noexcept { return value_; }
  int m_o() const noexcept { return m_o_; }
  int operator[](std::size_t) const noexcept { return value_; }

 private:
  int value_;
  int m_o_;
};

/// m_o mutually uncorrelated sequences: `generator` and its cyclic shifts.
struct SequenceGroup {
  int group_id = 0;
  PermutationSequence generator;
  std::vector<PermutationSequence> members;
};

enum class Construction {
  cyclic,      ///< all (m_o-1)! groups seeded by sequences starting with 1
  congruence,  ///< prime m_o: groups whose cross pairs share exactly one position
};

struct GroupFamily {
  int m_o = 0;
  int alpha = 0;
  Construction construction = Construction::congruence;
  std::vector<SequenceGroup> groups;

  /// Members of all groups in group order.
  std::vector<PermutationSequence> all_sequences() const;
};

/// Largest m_o for which cyclic_grouping enumerates all (m_o-1)! groups.
inline constexpr int kEnumerationCap = 8;

/// ((x - 1) mod m) + 1, always in {1, ..., m} (also for negative x).
int map_mod(long long x, int m);

bool is_prime(int value);

SequenceGroup cyclic_shift_group(const PermutationSequence& seed, int group_id = 1);

/// Partitions all m_o! permutations into (m_o-1)! groups of m_o uncorrelated sequences.
/// Throws Errc::cap_exceeded for m_o > kEnumerationCap.
std::vector<SequenceGroup> cyclic_grouping(int m_o);

/// Group i (1-based, i <= alpha) has members with k-th element map_mod(j + (k-1) i, m_o),
/// listed by first element j = 1..m_o; generator is the j = 1 member.
GroupFamily congruence_groups(int m_o, int alpha);

/// Number of positions where the two sequences hold the same BMI index.
int correlation_count(const PermutationSequence& a, const PermutationSequence& b);
int correlation_count(const PermutationSequence& a, const ConstantSequence& b);
int correlation_count(const ConstantSequence& a, const PermutationSequence& b);
int correlation_count(const ConstantSequence& a, const ConstantSequence& b);

/// One sequence per line under a "# group <id>" header.
void write_groups(std::ostream& out, std::span<const SequenceGroup> groups);
std::vector<SequenceGroup> read_groups(std::istream& in);

}  // namespace segcs
