#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace crashgp {

/// A point in the design space: torso recline (degrees) and D-ring Z offset.
/// The D-ring value is kept in the units of the results table.
struct InputPoint {
  double torso_angle_deg = 0.0;
  double dring_z = 0.0;

  friend bool operator==(const InputPoint&, const InputPoint&) = default;
  friend auto operator<=>(const InputPoint&, const InputPoint&) = default;
};

/// Input coordinates mapped to the unit square by a DesignBox.
struct UnitPoint {
  double u1 = 0.0;
  double u2 = 0.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double v) const { return v >= lo && v <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Rectangular design region; samples are drawn uniformly and independently
/// per dimension.
struct DesignBox {
  Interval torso_angle{-10.0, 10.0};
  Interval dring_z{-5.0, 5.0};

  /// Throws Config when either interval is degenerate or inverted.
  void validate() const;
  bool contains(const InputPoint& p) const;

  UnitPoint normalize(const InputPoint& p) const;
  InputPoint denormalize(const UnitPoint& u) const;

  friend bool operator==(const DesignBox&, const DesignBox&) = default;
};

enum class Metric { Hic15, AT1Max };

std::string_view to_string(Metric m) noexcept;
/// Accepts "hic15" and "a_t1_max".
std::optional<Metric> parse_metric(std::string_view name) noexcept;

struct RunRecord {
  int case_id = 0;
  InputPoint input;
  double hic15 = 0.0;
  double a_t1_max = 0.0;

  double value(Metric m) const { return m == Metric::Hic15 ? hic15 : a_t1_max; }
  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

inline constexpr int kLedgerSchemaVersion = 1;
inline constexpr std::string_view kLedgerHeader =
    "case,torso_angle_deg,dring_z,hic15,a_t1_max";
inline constexpr std::string_view kPendingHeader =
    "case,torso_angle_deg,dring_z";

/// Ordered, validated collection of completed simulation runs.
class Ledger {
 public:
  Ledger() = default;
  /// Validates every run against the box and the ledger invariants.
  Ledger(std::vector<RunRecord> runs, DesignBox box);

  const std::vector<RunRecord>& runs() const { return runs_; }
  const DesignBox& box() const { return box_; }
  int schema_version() const { return kLedgerSchemaVersion; }
  std::size_t size() const { return runs_.size(); }
  bool empty() const { return runs_.empty(); }

  const RunRecord* find_case(int case_id) const;
  const RunRecord* find_input(const InputPoint& p) const;

  /// Runs whose case id is listed, in ledger order; unknown ids are an error.
  Ledger select(const std::vector<int>& case_ids) const;

  friend bool operator==(const Ledger&, const Ledger&) = default;

 private:
  std::vector<RunRecord> runs_;
  DesignBox box_;
};

/// The 27 parametric runs: cases 1-25 on the 5x5 grid, 26-27 added later.
Ledger load_fixture();

/// Parses a ledger CSV. Errors name the offending line.
Ledger parse_ledger_csv(std::string_view text, const DesignBox& box);
Ledger ingest(const std::filesystem::path& path, const DesignBox& box);

std::string format_ledger_csv(const Ledger& ledger);
std::string format_ledger_sidecar(const Ledger& ledger);
/// Writes `path` and a `path.meta` sidecar holding box, units and schema.
void export_ledger(const Ledger& ledger, const std::filesystem::path& path);

struct PendingPoint {
  int case_id = 0;
  InputPoint input;
  friend bool operator==(const PendingPoint&, const PendingPoint&) = default;
};

std::string format_pending_csv(const std::vector<PendingPoint>& points);
std::vector<PendingPoint> parse_pending_csv(std::string_view text);
void write_pending(const std::vector<PendingPoint>& points,
                   const std::filesystem::path& path);
std::vector<PendingPoint> read_pending(const std::filesystem::path& path);

/// Shortest decimal text that round-trips the double exactly.
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace crashgp
