#pragma once

#include "pmdyn/measures.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace pmdyn {

/// Shortest connector z with u z v in the projected language of core, ties
/// broken lexicographically, |z| <= specification gap of core.
/// Throws NoPath, NotStronglyConnected.
Word find_connector(const SubDiagram& core, const Word& u, const Word& v);

inline constexpr double kDefaultGrowth = 4.0;
inline constexpr std::size_t kDefaultHorizon = 100000;

/// Block lengths in symbols. Explicit lengths are used first; further blocks
/// follow n_{j+1} = g * (cumulative length).
struct BlockSchedule {
  std::vector<std::size_t> lengths;
  double growth = kDefaultGrowth;
  std::size_t horizon = kDefaultHorizon;
};

struct IrregularSpec {
  Word u;
  Word v;
  Word z_uv;
  Word z_vu;
  BlockSchedule schedule;
};

struct Block {
  std::size_t start = 0;      // index of the connector (or of the word when none)
  std::size_t word_start = 0; // first symbol of the repeated word
  std::size_t end = 0;        // one past the last symbol
  bool is_u = true;
  std::size_t repeats = 0;
  std::size_t connector = 0;  // connector length in front of the block
};

struct IrregularSequence {
  SymbolStream stream;
  /// Blocks ending at or before the horizon.
  std::vector<Block> blocks;
  std::size_t horizon = 0;  // end of the last block
};

/// u^{m_1} z_uv v^{m_2} z_vu u^{m_3} ... with whole repeats per block. The
/// stream is infinite; blocks past the horizon continue the growth law.
/// Throws InvalidArgument, InadmissibleJunction.
IrregularSequence construct_irregular_sequence(const PiecewiseMonotonicMap& map, const IrregularSpec& spec);

/// First prefix length (1-based) of the stream that is not admissible, using
/// forward follower intervals. nullopt when all prefixes up to n pass.
std::optional<std::size_t> first_inadmissible_prefix(const PiecewiseMonotonicMap& map, const SymbolStream& s,
                                                     std::size_t n);

struct Checkpoint {
  std::size_t index = 0;  // prefix length
  double average = 0.0;
  std::optional<double> target;  // periodic integral of the block ending here
  std::optional<double> delta;   // certified distance bound to target
};

struct OscillationReport {
  std::vector<Checkpoint> checkpoints;
  double inf = 0.0, sup = 0.0, gap = 0.0;  // over all checkpoints
  double tail_gap = 0.0;                   // |difference| of the last two block-end averages
  double certified_gap_lb = 0.0;           // |a_u - a_v| - delta_u - delta_v at the last two block ends
  bool certified = false;
  std::optional<std::size_t> inadmissible_at;
  std::string note;
};

/// Birkhoff averages of phi along the stream at the given checkpoints (block
/// ends when empty). Real observables are evaluated at cylinder midpoints of
/// windows of the stream. Throws InvalidArgument past the horizon.
OscillationReport oscillation_check(const PiecewiseMonotonicMap& map, const Observable& phi,
                                    const IrregularSequence& seq, const IrregularSpec& spec,
                                    std::vector<std::size_t> checkpoints = {});

std::string checkpoint_csv(const OscillationReport& r);

struct AverageWitness {
  Word word;
  Real value;
  bool boundary = false;
};

struct VerificationRecord {
  bool gap_ok = false;
  bool averages_ok = false;
  bool entropy_ok = false;
  std::string gap_sha256;
  std::string averages_sha256;
  std::string entropy_sha256;
  bool all() const { return gap_ok && averages_ok && entropy_ok; }
};

struct Prop31Certificate {
  SubDiagram subdiagram;
  SpecificationCertificate gap;
  AverageWitness mu_per;
  AverageWitness contrast;
  double reference_integral = 0.0;  // Markov-measure integral on F_1
  double entropy_lb = 0.0;
  double target_entropy = 0.0;
  double epsilon = 0.0;
  std::size_t depth_cap = 0;
  std::size_t f1_depth = 0;
  std::size_t f1_size = 0;
  bool saturated = false;
  VerificationRecord verification;

  double separation() const { return std::fabs((mu_per.value - contrast.value).to_double()); }
};

inline constexpr double kSpreadTolerance = 1e-12;

/// Finite subdiagram F with specification, two separated periodic averages
/// and log rho(F) >= h* - epsilon. h* is `target` when given, otherwise the
/// spectral entropy at depth_cap. Throws SpreadZero, EntropyShortfall.
Prop31Certificate proposition31_search(const PiecewiseMonotonicMap& map, const Observable& phi, double epsilon,
                                       std::size_t depth_cap, std::size_t period_cap,
                                       std::optional<double> target = std::nullopt);

std::string to_json(const PiecewiseMonotonicMap& map, const Prop31Certificate& c, const Observable& phi);

}  // namespace pmdyn
