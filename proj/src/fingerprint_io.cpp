#include <charconv>
#include <cstdio>
#include <sstream>

#include "dvlae/error.hpp"
#include "dvlae/fingerprint.hpp"

namespace dvlae {
namespace {

constexpr std::string_view kFingerprintMagic = "dvlae-fingerprints";
constexpr std::string_view kSpecMagic = "dvlae-spec";
constexpr int kFormatVersion = 1;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string header(const FingerprintSpec& spec, std::string_view magic) {
  const HistogramSpec& h = spec.histogram;
  std::string out;
  out += std::string(magic) + " " + std::to_string(kFormatVersion) + "\n";
  out += "bins " + std::to_string(h.bins) + "\n";
  out += "comparison " + std::string(to_string(h.comparison)) + "\n";
  out += "columns " + std::to_string(h.columns()) + "\n";
  out += "layout";
  for (const auto& g : h.layout) out += " " + g.element + ":" + std::to_string(g.count);
  out += "\n";
  out += "descriptor_hash " + h.descriptor_hash + "\n";
  out += "checksum " + h.checksum + "\n";
  out += "reference " + spec.reference_id + "\n";
  out += "edges\n";
  for (const auto& r : h.ranges) out += fmt(r.lo) + " " + fmt(r.hi) + "\n";
  out += "reference_counts\n";
  for (std::size_t c = 0; c < h.columns(); ++c) {
    for (std::size_t b = 0; b < h.bins; ++b) {
      if (b) out += ' ';
      out += std::to_string(spec.reference.counts[c * h.bins + b]);
    }
    out += "\n";
  }
  return out;
}

void check_field(std::string_view value, std::string_view what) {
  if (value.find_first_of("\t\n\r") != std::string_view::npos) {
    throw Error(std::string(what) + " '" + std::string(value) +
                "' contains a tab or newline and cannot be written");
  }
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  std::string_view next() {
    if (pos_ >= text_.size()) fail("unexpected end of file");
    const auto end = text_.find('\n', pos_);
    const auto stop = end == std::string_view::npos ? text_.size() : end;
    std::string_view line = text_.substr(pos_, stop - pos_);
    pos_ = stop + 1;
    ++line_;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
  }

  bool done() const { return pos_ >= text_.size(); }

  std::string_view keyed(std::string_view key) {
    const std::string_view line = next();
    if (line.substr(0, key.size()) != key ||
        (line.size() > key.size() && line[key.size()] != ' ')) {
      fail("expected '" + std::string(key) + "'");
    }
    return line.size() > key.size() ? line.substr(key.size() + 1) : std::string_view{};
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error("fingerprint file line " + std::to_string(line_) + ": " + msg);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

std::size_t to_size(std::string_view s, const LineReader& in) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) in.fail("bad integer '" + std::string(s) + "'");
  return v;
}

double to_double(std::string_view s, const LineReader& in) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) in.fail("bad number '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto p = s.find(sep, start);
    out.push_back(s.substr(start, p == std::string_view::npos ? s.npos : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

FingerprintSpec parse_header(LineReader& in, std::string_view magic) {
  const std::string_view first = in.next();
  if (first != std::string(magic) + " " + std::to_string(kFormatVersion)) {
    in.fail("expected '" + std::string(magic) + " " + std::to_string(kFormatVersion) + "'");
  }
  FingerprintSpec spec;
  HistogramSpec& h = spec.histogram;
  h.bins = to_size(in.keyed("bins"), in);
  if (h.bins == 0) in.fail("bins must be positive");
  h.comparison = comparison_from_string(in.keyed("comparison"));
  const std::size_t columns = to_size(in.keyed("columns"), in);
  const std::string_view layout = in.keyed("layout");
  std::size_t total = 0;
  if (!layout.empty()) {
    for (std::string_view item : split(layout, ' ')) {
      const auto colon = item.rfind(':');
      if (colon == std::string_view::npos) in.fail("bad layout entry '" + std::string(item) + "'");
      h.layout.push_back({std::string(item.substr(0, colon)), to_size(item.substr(colon + 1), in)});
      total += h.layout.back().count;
    }
  }
  if (total != columns) in.fail("layout does not add up to the column count");
  h.descriptor_hash = std::string(in.keyed("descriptor_hash"));
  h.checksum = std::string(in.keyed("checksum"));
  spec.reference_id = std::string(in.keyed("reference"));

  in.keyed("edges");
  h.ranges.resize(columns);
  for (std::size_t c = 0; c < columns; ++c) {
    const auto parts = split(in.next(), ' ');
    if (parts.size() != 2) in.fail("expected 'lo hi'");
    h.ranges[c] = {to_double(parts[0], in), to_double(parts[1], in)};
    if (!(h.ranges[c].lo < h.ranges[c].hi)) in.fail("bin range must have lo < hi");
  }
  if (h.compute_checksum() != h.checksum) in.fail("checksum does not match the header contents");

  in.keyed("reference_counts");
  spec.reference.structure_id = spec.reference_id;
  spec.reference.spec_checksum = h.checksum;
  spec.reference.counts.resize(h.bit_count());
  spec.reference.occupancy = BitVector(h.bit_count());
  for (std::size_t c = 0; c < columns; ++c) {
    const auto parts = split(in.next(), ' ');
    if (parts.size() != h.bins) in.fail("expected " + std::to_string(h.bins) + " counts");
    for (std::size_t b = 0; b < h.bins; ++b) {
      const std::size_t count = to_size(parts[b], in);
      spec.reference.counts[c * h.bins + b] = static_cast<std::uint32_t>(count);
      if (count > 0) spec.reference.occupancy.set(c * h.bins + b);
    }
  }
  return spec;
}

}  // namespace

std::string write_spec_file(const FingerprintSpec& spec) {
  check_field(spec.reference_id, "reference id");
  return header(spec, kSpecMagic);
}

FingerprintSpec read_spec_file(std::string_view text) {
  LineReader in(text);
  FingerprintSpec spec = parse_header(in, kSpecMagic);
  if (!in.done()) in.fail("trailing content after spec");
  return spec;
}

std::string write_fingerprint_file(const FingerprintSet& set) {
  check_field(set.spec.reference_id, "reference id");
  std::string out = header(set.spec, kFingerprintMagic);
  out += "records " + std::to_string(set.fingerprints.size()) + "\n";
  for (const auto& fp : set.fingerprints) {
    if (fp.spec_checksum != set.spec.histogram.checksum) {
      throw Error("fingerprint '" + fp.structure_id + "' does not belong to this spec");
    }
    check_field(fp.structure_id, "structure id");
    check_field(fp.tag, "tag");
    out += fp.structure_id + "\t" + fp.tag + "\t" + fp.bits.to_hex() + "\n";
  }
  return out;
}

FingerprintSet read_fingerprint_file(std::string_view text) {
  LineReader in(text);
  FingerprintSet set;
  set.spec = parse_header(in, kFingerprintMagic);
  const std::size_t records = to_size(in.keyed("records"), in);
  const std::size_t bits = set.spec.histogram.bit_count();
  set.fingerprints.reserve(records);
  for (std::size_t r = 0; r < records; ++r) {
    const auto parts = split(in.next(), '\t');
    if (parts.size() != 3) in.fail("record must have id, tag and bits separated by tabs");
    DifferenceVector fp;
    fp.structure_id = std::string(parts[0]);
    fp.tag = std::string(parts[1]);
    fp.reference_id = set.spec.reference_id;
    fp.spec_checksum = set.spec.histogram.checksum;
    try {
      fp.bits = BitVector::from_hex(parts[2], bits);
    } catch (const Error& e) {
      in.fail(e.what());
    }
    set.fingerprints.push_back(std::move(fp));
  }
  if (!in.done()) in.fail("trailing content after records");
  return set;
}

}  // namespace dvlae
