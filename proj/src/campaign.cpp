#include "crashgp/campaign.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

#include "crashgp/error.hpp"

namespace crashgp {

namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

std::string describe(const InputPoint& p) {
  return "(" + format_double(p.torso_angle_deg) + ", " +
         format_double(p.dring_z) + ")";
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::string where(std::size_t line, std::string_view column) {
  return "line " + std::to_string(line) + ", column '" + std::string(column) + "'";
}

double parse_real(std::string_view field, std::size_t line, std::string_view column) {
  field = trim(field);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
    fail(ErrorKind::Parse, where(line, column) + ": not a number: '" + std::string(field) + "'");
  if (!std::isfinite(v))
    fail(ErrorKind::Data, where(line, column) + ": value is not finite");
  return v;
}

int parse_int(std::string_view field, std::size_t line, std::string_view column) {
  field = trim(field);
  int v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
    fail(ErrorKind::Parse, where(line, column) + ": not an integer: '" + std::string(field) + "'");
  return v;
}

void check_header(std::string_view got, std::string_view want) {
  if (got != want)
    fail(ErrorKind::Parse, "line 1: expected header '" + std::string(want) +
                               "', got '" + std::string(got) + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void DesignBox::validate() const {
  if (!(torso_angle.lo < torso_angle.hi))
    fail(ErrorKind::Config, "design box: torso angle range must satisfy lo < hi");
  if (!(dring_z.lo < dring_z.hi))
    fail(ErrorKind::Config, "design box: D-ring range must satisfy lo < hi");
}

bool DesignBox::contains(const InputPoint& p) const {
  return torso_angle.contains(p.torso_angle_deg) && dring_z.contains(p.dring_z);
}

UnitPoint DesignBox::normalize(const InputPoint& p) const {
  validate();
  return {(p.torso_angle_deg - torso_angle.lo) / torso_angle.width(),
          (p.dring_z - dring_z.lo) / dring_z.width()};
}

InputPoint DesignBox::denormalize(const UnitPoint& u) const {
  validate();
  return {torso_angle.lo + u.u1 * torso_angle.width(),
          dring_z.lo + u.u2 * dring_z.width()};
}

std::string_view to_string(Metric m) noexcept {
  return m == Metric::Hic15 ? "hic15" : "a_t1_max";
}

std::optional<Metric> parse_metric(std::string_view name) noexcept {
  if (name == "hic15") return Metric::Hic15;
  if (name == "a_t1_max") return Metric::AT1Max;
  return std::nullopt;
}

Ledger::Ledger(std::vector<RunRecord> runs, DesignBox box)
    : runs_(std::move(runs)), box_(box) {
  box_.validate();
  std::set<int> ids;
  for (std::size_t i = 0; i < runs_.size(); ++i) {
    const RunRecord& r = runs_[i];
    const std::string tag = "case " + std::to_string(r.case_id);
    if (!ids.insert(r.case_id).second)
      fail(ErrorKind::Conflict, tag + ": duplicate case id");
    if (!std::isfinite(r.input.torso_angle_deg) || !std::isfinite(r.input.dring_z))
      fail(ErrorKind::Data, tag + ": input is not finite");
    if (!box_.contains(r.input))
      fail(ErrorKind::Range, tag + ": input " + describe(r.input) + " lies outside the design box");
    if (!std::isfinite(r.hic15) || r.hic15 < 0.0)
      fail(ErrorKind::Data, tag + ": hic15 must be finite and non-negative");
    if (!std::isfinite(r.a_t1_max) || r.a_t1_max <= 0.0)
      fail(ErrorKind::Data, tag + ": a_t1_max must be finite and positive");
    for (std::size_t j = 0; j < i; ++j) {
      const RunRecord& o = runs_[j];
      if (o.input == r.input && (o.hic15 != r.hic15 || o.a_t1_max != r.a_t1_max))
        fail(ErrorKind::Conflict, tag + " and case " + std::to_string(o.case_id) +
                                      " share input " + describe(r.input) +
                                      " with different outputs");
    }
  }
}

const RunRecord* Ledger::find_case(int case_id) const {
  for (const auto& r : runs_)
    if (r.case_id == case_id) return &r;
  return nullptr;
}

const RunRecord* Ledger::find_input(const InputPoint& p) const {
  for (const auto& r : runs_)
    if (r.input == p) return &r;
  return nullptr;
}

Ledger Ledger::select(const std::vector<int>& case_ids) const {
  std::set<int> wanted(case_ids.begin(), case_ids.end());
  for (int id : wanted)
    if (!find_case(id)) fail(ErrorKind::Request, "case " + std::to_string(id) + " is not in the ledger");
  std::vector<RunRecord> out;
  for (const auto& r : runs_)
    if (wanted.count(r.case_id)) out.push_back(r);
  return Ledger(std::move(out), box_);
}

Ledger load_fixture() {
  static const double kTorso[] = {-10.0, -5.0, 0.0, 5.0, 10.0};
  static const double kDring[] = {-5.0, -2.5, 0.0, 2.5, 5.0};
  static const double kHic[] = {
      20.46, 19.44, 18.91, 19.44, 19.34,  //
      21.77, 21.93, 21.38, 21.42, 22.00,  //
      26.41, 25.02, 25.84, 25.11, 23.53,  //
      32.00, 32.91, 31.20, 31.23, 30.85,  //
      32.43, 32.65, 32.13, 32.73, 32.05};
  static const double kAT1[] = {
      13.74, 14.32, 13.68, 13.33, 13.64,  //
      16.33, 15.29, 14.61, 13.92, 14.71,  //
      14.82, 14.86, 14.35, 13.20, 13.08,  //
      14.16, 14.46, 15.23, 14.21, 14.82,  //
      13.53, 14.47, 14.02, 14.12, 14.60};

  std::vector<RunRecord> runs;
  int id = 1;
  for (int t = 0; t < 5; ++t)
    for (int d = 0; d < 5; ++d, ++id)
      runs.push_back({id, {kTorso[t], kDring[d]}, kHic[id - 1], kAT1[id - 1]});
  runs.push_back({26, {-2.5, -5.0}, 24.28, 13.98});
  runs.push_back({27, {2.5, 0.0}, 27.54, 13.43});
  return Ledger(std::move(runs), DesignBox{});
}

Ledger parse_ledger_csv(std::string_view text, const DesignBox& box) {
  auto lines = split_lines(text);
  if (lines.empty()) fail(ErrorKind::Data, "ledger file is empty");
  check_header(lines[0], kLedgerHeader);
  if (lines.size() == 1) fail(ErrorKind::Data, "ledger file has a header but no runs");

  static const std::string_view kCols[] = {"case", "torso_angle_deg", "dring_z",
                                           "hic15", "a_t1_max"};
  std::vector<RunRecord> runs;
  std::set<int> ids;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    auto fields = split_fields(lines[i]);
    if (fields.size() != 5)
      fail(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected 5 fields, got " +
                                 std::to_string(fields.size()));
    RunRecord r;
    r.case_id = parse_int(fields[0], line_no, kCols[0]);
    r.input.torso_angle_deg = parse_real(fields[1], line_no, kCols[1]);
    r.input.dring_z = parse_real(fields[2], line_no, kCols[2]);
    r.hic15 = parse_real(fields[3], line_no, kCols[3]);
    r.a_t1_max = parse_real(fields[4], line_no, kCols[4]);
    if (!box.torso_angle.contains(r.input.torso_angle_deg))
      fail(ErrorKind::Range, where(line_no, kCols[1]) + ": " + format_double(r.input.torso_angle_deg) +
                                 " outside [" + format_double(box.torso_angle.lo) + ", " +
                                 format_double(box.torso_angle.hi) + "]");
    if (!box.dring_z.contains(r.input.dring_z))
      fail(ErrorKind::Range, where(line_no, kCols[2]) + ": " + format_double(r.input.dring_z) +
                                 " outside [" + format_double(box.dring_z.lo) + ", " +
                                 format_double(box.dring_z.hi) + "]");
    if (!ids.insert(r.case_id).second)
      fail(ErrorKind::Conflict, "line " + std::to_string(line_no) + ": duplicate case id " +
                                    std::to_string(r.case_id));
    runs.push_back(r);
  }
  try {
    return Ledger(std::move(runs), box);
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("ledger: ") + e.what());
  }
}

Ledger ingest(const std::filesystem::path& path, const DesignBox& box) {
  try {
    return parse_ledger_csv(read_text_file(path), box);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string format_ledger_csv(const Ledger& ledger) {
  std::string out(kLedgerHeader);
  out += '\n';
  for (const auto& r : ledger.runs()) {
    out += std::to_string(r.case_id) + ',' + format_double(r.input.torso_angle_deg) + ',' +
           format_double(r.input.dring_z) + ',' + format_double(r.hic15) + ',' +
           format_double(r.a_t1_max) + '\n';
  }
  return out;
}

std::string format_ledger_sidecar(const Ledger& ledger) {
  const DesignBox& b = ledger.box();
  std::ostringstream os;
  os << "schema_version=" << ledger.schema_version() << '\n'
     << "runs=" << ledger.size() << '\n'
     << "torso_angle_lo=" << format_double(b.torso_angle.lo) << '\n'
     << "torso_angle_hi=" << format_double(b.torso_angle.hi) << '\n'
     << "dring_z_lo=" << format_double(b.dring_z.lo) << '\n'
     << "dring_z_hi=" << format_double(b.dring_z.hi) << '\n'
     << "torso_angle_units=deg\n"
     << "dring_z_units=table units (the -5..5 table values; text describes -50..50 mm)\n"
     << "hic15_units=dimensionless\n"
     << "a_t1_max_units=m/s^2\n";
  return os.str();
}

void export_ledger(const Ledger& ledger, const std::filesystem::path& path) {
  write_text_file(path, format_ledger_csv(ledger));
  std::filesystem::path meta = path;
  meta += ".meta";
  write_text_file(meta, format_ledger_sidecar(ledger));
}

std::string format_pending_csv(const std::vector<PendingPoint>& points) {
  std::string out(kPendingHeader);
  out += '\n';
  for (const auto& p : points)
    out += std::to_string(p.case_id) + ',' + format_double(p.input.torso_angle_deg) + ',' +
           format_double(p.input.dring_z) + '\n';
  return out;
}

std::vector<PendingPoint> parse_pending_csv(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty()) fail(ErrorKind::Data, "pending manifest is empty");
  check_header(lines[0], kPendingHeader);
  std::vector<PendingPoint> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    auto fields = split_fields(lines[i]);
    if (fields.size() != 3)
      fail(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected 3 fields, got " +
                                 std::to_string(fields.size()));
    out.push_back({parse_int(fields[0], line_no, "case"),
                   {parse_real(fields[1], line_no, "torso_angle_deg"),
                    parse_real(fields[2], line_no, "dring_z")}});
  }
  return out;
}

void write_pending(const std::vector<PendingPoint>& points, const std::filesystem::path& path) {
  write_text_file(path, format_pending_csv(points));
}

std::vector<PendingPoint> read_pending(const std::filesystem::path& path) {
  return parse_pending_csv(read_text_file(path));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

}  // namespace crashgp
