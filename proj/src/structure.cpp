#include "dvlae/structure.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "dvlae/error.hpp"

namespace dvlae {

void Structure::validate() const {
  if (species.size() != positions.size()) {
    throw Error("structure '" + id + "': " + std::to_string(species.size()) + " species but " +
                std::to_string(positions.size()) + " positions");
  }
  if (any_periodic() && !(std::abs(cell.determinant()) > 0.0)) {
    throw Error("structure '" + id + "': periodic cell is singular");
  }
}

Dataset Dataset::from_structures(std::vector<Structure> structures) {
  Dataset ds;
  std::unordered_set<std::string> ids;
  std::set<std::string> seen;
  for (const Structure& s : structures) {
    s.validate();
    if (!ids.insert(s.id).second) throw Error("duplicate structure id '" + s.id + "'");
    for (const std::string& sp : s.species) {
      if (seen.insert(sp).second) ds.elements.push_back(sp);
    }
  }
  ds.structures = std::move(structures);
  return ds;
}

const Structure* Dataset::find(std::string_view id) const {
  for (const Structure& s : structures) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

bool parse_double(std::string_view token, double& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size() && std::isfinite(out);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// key=value pairs, values optionally double-quoted; bare keys map to "T".
std::map<std::string, std::string> parse_comment(std::string_view line) {
  std::map<std::string, std::string> kv;
  std::size_t i = 0;
  const auto skip_ws = [&] {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
  };
  while (true) {
    skip_ws();
    if (i >= line.size()) break;
    const std::size_t key_start = i;
    while (i < line.size() && line[i] != '=' && !std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
    }
    const std::string key = lower(line.substr(key_start, i - key_start));
    skip_ws();
    if (i < line.size() && line[i] == '=') {
      ++i;
      skip_ws();
      std::string value;
      if (i < line.size() && (line[i] == '"' || line[i] == '\'')) {
        const char quote = line[i++];
        const std::size_t end = line.find(quote, i);
        const std::size_t stop = end == std::string_view::npos ? line.size() : end;
        value = std::string(line.substr(i, stop - i));
        i = end == std::string_view::npos ? line.size() : end + 1;
      } else {
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        value = std::string(line.substr(start, i - start));
      }
      kv[key] = value;
    } else {
      kv[key] = "T";
    }
  }
  return kv;
}

struct Columns {
  std::size_t species = 0;
  std::size_t pos = 1;
  std::size_t total = 4;
};

Columns parse_properties(const std::string& props, std::size_t frame, std::size_t line) {
  std::vector<std::string> fields;
  std::stringstream ss(props);
  for (std::string f; std::getline(ss, f, ':');) fields.push_back(f);
  if (fields.size() % 3 != 0) throw ParseError("malformed Properties '" + props + "'", frame, line);

  Columns cols;
  bool have_species = false;
  bool have_pos = false;
  std::size_t offset = 0;
  for (std::size_t f = 0; f < fields.size(); f += 3) {
    std::size_t count = 0;
    const auto [ptr, ec] =
        std::from_chars(fields[f + 2].data(), fields[f + 2].data() + fields[f + 2].size(), count);
    if (ec != std::errc() || ptr != fields[f + 2].data() + fields[f + 2].size() || count == 0) {
      throw ParseError("malformed Properties column count in '" + props + "'", frame, line);
    }
    const std::string name = lower(fields[f]);
    if (name == "species") {
      cols.species = offset;
      have_species = true;
    } else if (name == "pos") {
      if (count != 3) throw ParseError("pos property must have 3 columns", frame, line);
      cols.pos = offset;
      have_pos = true;
    }
    offset += count;
  }
  if (!have_species || !have_pos) {
    throw ParseError("Properties must declare species and pos", frame, line);
  }
  cols.total = offset;
  return cols;
}

std::string frame_prefix(const std::string& source, std::size_t frame, std::size_t line) {
  return source + ": frame " + std::to_string(frame) + ", line " + std::to_string(line) + ": ";
}

}  // namespace

Dataset parse_extxyz(std::istream& in, const std::string& source) {
  std::vector<Structure> structures;
  std::string line;
  std::size_t line_no = 0;
  std::size_t frame = 0;

  const auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError(frame_prefix(source, frame, line_no) + msg, frame, line_no);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view count_text = trim(line);
    if (count_text.empty()) continue;

    std::size_t natoms = 0;
    {
      const auto [ptr, ec] =
          std::from_chars(count_text.data(), count_text.data() + count_text.size(), natoms);
      if (ec != std::errc() || ptr != count_text.data() + count_text.size()) {
        throw fail("malformed atom count '" + std::string(count_text) + "'");
      }
    }

    if (!std::getline(in, line)) {
      ++line_no;
      throw fail("missing comment line");
    }
    ++line_no;
    const auto kv = parse_comment(line);

    Structure s;
    s.id = source + "#" + std::to_string(frame);

    if (auto it = kv.find("lattice"); it != kv.end()) {
      const auto tokens = split_ws(it->second);
      if (tokens.size() != 9) throw fail("Lattice must have 9 components");
      for (int k = 0; k < 9; ++k) {
        double v = 0.0;
        if (!parse_double(tokens[k], v)) {
          throw fail("unparsable Lattice component '" + std::string(tokens[k]) + "'");
        }
        s.cell(k / 3, k % 3) = v;
      }
      s.periodic = {true, true, true};
      if (auto pbc = kv.find("pbc"); pbc != kv.end()) {
        const auto flags = split_ws(pbc->second);
        if (flags.size() != 3) throw fail("pbc must have 3 flags");
        for (int d = 0; d < 3; ++d) {
          const std::string f = lower(flags[d]);
          if (f == "t" || f == "true" || f == "1") {
            s.periodic[d] = true;
          } else if (f == "f" || f == "false" || f == "0") {
            s.periodic[d] = false;
          } else {
            throw fail("unrecognised pbc flag '" + std::string(flags[d]) + "'");
          }
        }
      }
    }
    if (auto it = kv.find("tag"); it != kv.end()) {
      s.tag = it->second;
    } else if (auto ct = kv.find("config_type"); ct != kv.end()) {
      s.tag = ct->second;
    }

    Columns cols;
    if (auto it = kv.find("properties"); it != kv.end()) {
      try {
        cols = parse_properties(it->second, frame, line_no);
      } catch (const ParseError& e) {
        throw fail(e.what());
      }
    }

    s.species.reserve(natoms);
    s.positions.reserve(natoms);
    for (std::size_t a = 0; a < natoms; ++a) {
      if (!std::getline(in, line)) {
        throw fail("frame declares " + std::to_string(natoms) + " atoms but provides " +
                   std::to_string(a));
      }
      ++line_no;
      const auto tokens = split_ws(line);
      if (tokens.size() < cols.total) {
        throw fail("atom line has " + std::to_string(tokens.size()) + " columns, expected " +
                   std::to_string(cols.total));
      }
      Vec3 p;
      for (int d = 0; d < 3; ++d) {
        if (!parse_double(tokens[cols.pos + d], p[d])) {
          throw fail("unparsable coordinate '" + std::string(tokens[cols.pos + d]) + "'");
        }
      }
      s.species.emplace_back(tokens[cols.species]);
      s.positions.push_back(p);
    }

    if (s.any_periodic() && !(std::abs(s.cell.determinant()) > 0.0)) {
      throw fail("periodic cell is singular");
    }
    structures.push_back(std::move(s));
    ++frame;
  }
  return Dataset::from_structures(std::move(structures));
}

Dataset parse_extxyz_string(std::string_view text, const std::string& source) {
  std::istringstream in{std::string(text)};
  return parse_extxyz(in, source);
}

Dataset read_extxyz_file(const std::filesystem::path& path, const std::string& source) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open structure file '" + path.string() + "'");
  return parse_extxyz(in, source.empty() ? path.string() : source);
}

std::vector<std::filesystem::path> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest '" + path.string() + "'");
  std::vector<std::filesystem::path> files;
  const auto base = path.parent_path();
  for (std::string line; std::getline(in, line);) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string_view entry = trim(line);
    if (entry.empty()) continue;
    std::filesystem::path p{std::string(entry)};
    files.push_back(p.is_absolute() ? p : base / p);
  }
  return files;
}

Dataset load_dataset(const std::vector<std::filesystem::path>& files,
                     const std::filesystem::path& id_base) {
  std::vector<Structure> all;
  for (const auto& f : files) {
    std::string source = f.string();
    if (!id_base.empty()) {
      const auto rel = f.lexically_normal().lexically_relative(id_base.lexically_normal());
      if (!rel.empty()) source = rel.generic_string();
    }
    Dataset part = read_extxyz_file(f, source);
    for (Structure& s : part.structures) all.push_back(std::move(s));
  }
  return Dataset::from_structures(std::move(all));
}

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string write_extxyz(const Structure& s) {
  std::string out = std::to_string(s.size()) + "\n";
  if (s.any_periodic()) {
    out += "Lattice=\"";
    for (int k = 0; k < 9; ++k) {
      if (k) out += ' ';
      out += fmt_double(s.cell(k / 3, k % 3));
    }
    out += "\" ";
  }
  out += "Properties=species:S:1:pos:R:3";
  if (s.any_periodic()) {
    out += " pbc=\"";
    for (int d = 0; d < 3; ++d) out += std::string(d ? " " : "") + (s.periodic[d] ? "T" : "F");
    out += "\"";
  }
  if (!s.tag.empty()) out += " tag=\"" + s.tag + "\"";
  out += "\n";
  for (std::size_t a = 0; a < s.size(); ++a) {
    out += s.species[a];
    for (int d = 0; d < 3; ++d) out += " " + fmt_double(s.positions[a][d]);
    out += "\n";
  }
  return out;
}

Structure build_supercell(const Structure& s, std::array<int, 3> reps) {
  for (int d = 0; d < 3; ++d) {
    if (reps[d] <= 0) throw Error("supercell repetitions must be positive");
    if (reps[d] > 1 && !s.periodic[d]) {
      throw Error("cannot replicate structure '" + s.id + "' along a non-periodic direction");
    }
  }
  if (reps == std::array<int, 3>{1, 1, 1}) return s;

  Structure out;
  out.periodic = s.periodic;
  out.tag = s.tag;
  out.id = s.id + "@" + std::to_string(reps[0]) + "x" + std::to_string(reps[1]) + "x" +
           std::to_string(reps[2]);
  for (int d = 0; d < 3; ++d) out.cell.row(d) = s.cell.row(d) * static_cast<double>(reps[d]);

  const std::size_t total = s.size() * static_cast<std::size_t>(reps[0] * reps[1] * reps[2]);
  out.species.reserve(total);
  out.positions.reserve(total);
  for (int a = 0; a < reps[0]; ++a) {
    for (int b = 0; b < reps[1]; ++b) {
      for (int c = 0; c < reps[2]; ++c) {
        const Vec3 t = (a * s.cell.row(0) + b * s.cell.row(1) + c * s.cell.row(2)).transpose();
        for (std::size_t i = 0; i < s.size(); ++i) {
          out.species.push_back(s.species[i]);
          out.positions.push_back(s.positions[i] + t);
        }
      }
    }
  }
  return out;
}

}  // namespace dvlae
