#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gms/certificate.hpp"
#include "gms/sigma.hpp"
#include "gms/special.hpp"

namespace gms {

/// Finite caps under which the norming set is saturated.
struct KCaps {
  int generation_cap = 1;
  /// Largest coordinate index a member may touch.
  Index window = 8;
  /// Largest support size of a member.
  std::size_t max_support_size = 3;
  /// Largest number of children of a regular node (also bounded by n_j).
  long arity_cap = 2;
  /// Weight indices allowed for regular formations; the paper uses even ones.
  std::vector<int> regular_weights{2};
  std::size_t record_budget = 2'000'000;
};

enum class Formation { terminal, regular, r_special, lambda_special, admitted };

std::string to_string(Formation f);

using RecordId = std::uint32_t;

struct KRecord {
  FinVector f;
  Formation formation = Formation::terminal;
  /// Formation-assigned weight index (0 for terminals).
  int weight_index = 0;
  int sign = 1;
  /// Restriction of special formations.
  Interval restriction{1, 1};
  /// R power (r_special) or Lambda power of the modeling (lambda_special).
  int k = 0;
  /// Regular children.
  std::vector<RecordId> children;
  /// Model sequence of special formations.
  int sequence = -1;
  int generation = 0;
  int depth = 0;
};

/// Generation-, window-, support- and weight-capped realization of the norming
/// set: terminals, regular functionals of registered weights, and R-special
/// and Lambda-special functionals over registered j-special models, closed
/// under sign change and interval restriction within the caps.
class KContext {
 public:
  KContext(ParameterSchedule sched, KCaps caps, SigmaRegistry registry = SigmaRegistry());

  const ParameterSchedule& schedule() const { return sched_; }
  const KCaps& caps() const { return caps_; }
  SigmaRegistry& registry() { return registry_; }
  const SigmaRegistry& registry() const { return registry_; }
  const std::vector<KRecord>& records() const { return records_; }
  const KRecord& record(RecordId id) const { return records_.at(id); }
  const std::vector<SpecialSequence>& sequences() const { return sequences_; }

  /// Registers a j-special model; returns its id. Must precede generate().
  int add_sequence(SpecialSequence model);

  /// Builds generations 0..generation_cap. Stops early, leaving the context
  /// non-saturated, when the record budget is exhausted.
  void generate();

  /// Saturated within caps and free of planted records.
  bool saturated() const { return saturated_ && !admitted_; }
  bool budget_exhausted() const { return !saturated_; }
  int generations_built() const { return built_; }

  std::optional<RecordId> find(const FinVector& f) const;
  std::optional<RecordId> find(const FinVector& f, int weight_index) const;
  bool contains(const FinVector& f) const { return find(f).has_value(); }
  bool within_caps(const FinVector& f) const;

  /// Inserts a record verbatim (negative controls); the context is then no
  /// longer reported as saturated.
  RecordId admit(KRecord rec);

  /// Functional rebuilt from the formation data alone.
  FinVector reconstruct(RecordId id) const;
  TreeCertificate certificate(RecordId id) const;
  /// Members of the (possibly Lambda-lifted) special sequence behind a special record.
  std::vector<FinVector> special_members(const KRecord& rec) const;

 private:
  std::optional<RecordId> insert(KRecord rec);
  void build_regular(int generation, std::size_t prev);
  void build_special(int generation, std::size_t prev);
  void add_restrictions(const FinVector& g, int seq, Formation form, int k, int generation, int depth);

  ParameterSchedule sched_;
  KCaps caps_;
  SigmaRegistry registry_;
  std::vector<SpecialSequence> sequences_;
  std::vector<KRecord> records_;
  std::unordered_map<std::string, RecordId> by_key_;
  std::unordered_map<std::string, RecordId> by_functional_;
  bool saturated_ = true;
  bool admitted_ = false;
  int built_ = -1;
};

KContext generate_K(const KCaps& caps, const ParameterSchedule& sched, std::vector<SpecialSequence> models = {},
                    SigmaRegistry registry = SigmaRegistry());

struct ClosureReport {
  std::string name;
  bool ok = true;
  std::size_t checked = 0;
  /// Obligations outside the caps, verified structurally instead of by lookup.
  std::size_t structural = 0;
  std::size_t violation_count = 0;
  /// First few violations, each naming the offending functional.
  std::vector<std::string> violations;
  std::vector<std::string> caveats;
};

/// Symmetry and interval-restriction closure.
ClosureReport check_K1(const KContext& ctx);
/// Every record's formation rebuilds its functional from earlier members and
/// yields a structurally valid certificate.
ClosureReport check_K2(const KContext& ctx);
/// R(K) within K, and for every member a lift h with Rh = f built as in the
/// (K3) proof that lies in K (by lookup inside the caps, structurally outside).
ClosureReport check_K3(const KContext& ctx);

}  // namespace gms
