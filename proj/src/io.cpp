#include "mocca/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "mocca/errors.hpp"

namespace mocca {
namespace {

constexpr const char* kStackMagic = "MOCCA-KSP/1";
constexpr const char* kMaskMagic = "MOCCA-MSK/1";
constexpr const char* kLayout = "column-major-centered";
constexpr const char* kSampleFormat =
    "complex: two little-endian 64-bit floats, real then imaginary";

void put_f64le(std::string& out, double v) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(char((bits >> (8 * i)) & 0xff));
}

double get_f64le(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= std::uint64_t(p[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void dump(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw data_error("cannot write '" + path + "'");
  out.write(bytes.data(), std::streamsize(bytes.size()));
  if (!out) throw data_error("short write to '" + path + "'");
}

struct Header {
  std::vector<std::pair<std::string, std::string>> fields;
  std::size_t payload_offset = 0;

  const std::string& get(const std::string& key, const std::string& path) const {
    for (const auto& [k, v] : fields)
      if (k == key) return v;
    throw data_error(path + ": missing header field '" + key + "'");
  }
  long get_int(const std::string& key, const std::string& path) const {
    try {
      return std::stol(get(key, path));
    } catch (const std::exception&) {
      throw data_error(path + ": header field '" + key + "' is not an integer");
    }
  }
};

Header parse_header(const std::string& bytes, const char* magic, const std::string& path) {
  Header h;
  std::size_t pos = 0;
  auto next_line = [&](std::string& line) {
    const std::size_t nl = bytes.find('\n', pos);
    if (nl == std::string::npos) throw data_error(path + ": truncated header");
    line.assign(bytes, pos, nl - pos);
    pos = nl + 1;
  };
  std::string line;
  next_line(line);
  if (line != magic)
    throw data_error(path + ": bad magic (expected " + std::string(magic) + ")");
  for (;;) {
    next_line(line);
    if (line == "end") break;
    const std::size_t eq = line.find(" = ");
    if (eq == std::string::npos)
      throw data_error(path + ": malformed header line '" + line + "'");
    h.fields.emplace_back(line.substr(0, eq), line.substr(eq + 3));
  }
  h.payload_offset = pos;
  return h;
}

}  // namespace

void write_stack(const std::string& path, const KSpaceStack& stack) {
  if (stack.n < 1 || stack.num_coils() < 1)
    throw std::invalid_argument("write_stack: empty stack");
  std::string out;
  out += kStackMagic;
  out += "\nn = " + std::to_string(stack.n);
  out += "\ncoils = " + std::to_string(stack.num_coils());
  out += "\nlayout = ";
  out += kLayout;
  out += "\nformat = ";
  out += kSampleFormat;
  out += "\nend\n";
  for (const auto& coil : stack.coils) {
    if (coil.size() != stack.n) throw std::invalid_argument("write_stack: ragged stack");
    for (const auto& v : coil.values()) {
      put_f64le(out, v.real());
      put_f64le(out, v.imag());
    }
  }
  dump(path, out);
}

KSpaceStack read_stack(const std::string& path) {
  const std::string bytes = slurp(path);
  const Header h = parse_header(bytes, kStackMagic, path);
  const long n = h.get_int("n", path);
  const long coils = h.get_int("coils", path);
  if (n < 1 || coils < 1) throw data_error(path + ": invalid dimensions");
  if (h.get("layout", path) != kLayout)
    throw data_error(path + ": unsupported layout '" + h.get("layout", path) + "'");
  if (h.get("format", path) != kSampleFormat)
    throw data_error(path + ": unsupported sample format");

  const std::size_t want = 16 * std::size_t(n) * std::size_t(n) * std::size_t(coils);
  if (bytes.size() - h.payload_offset != want)
    throw data_error(path + ": payload size mismatch (expected " + std::to_string(want) +
                     " bytes)");
  KSpaceStack stack{int(n), int(coils)};
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + h.payload_offset;
  for (auto& coil : stack.coils)
    for (auto& v : coil.values()) {
      v = cdouble(get_f64le(p), get_f64le(p + 8));
      p += 16;
    }
  return stack;
}

void write_mask(const std::string& path, const SamplingPattern& pattern) {
  pattern.validate();
  std::string out;
  out += kMaskMagic;
  out += "\nn = " + std::to_string(pattern.n);
  out += "\nacs-m = " + std::to_string(pattern.acs_m);
  out += "\nsupport-l = " + std::to_string(pattern.support_l);
  out += "\nkind = " + pattern.kind_string();
  out += "\nend\n";
  for (auto b : pattern.mask) out.push_back(char(b));
  dump(path, out);
}

SamplingPattern read_mask(const std::string& path) {
  const std::string bytes = slurp(path);
  const Header h = parse_header(bytes, kMaskMagic, path);
  const long n = h.get_int("n", path);
  const long m = h.get_int("acs-m", path);
  const long l = h.get_int("support-l", path);
  const std::string kind = h.get("kind", path);

  const std::size_t want = std::size_t(n) * std::size_t(n);
  if (bytes.size() - h.payload_offset != want)
    throw data_error(path + ": payload size mismatch");

  SamplingPattern p;
  p.n = int(n);
  p.acs_m = int(m);
  p.support_l = int(l);
  p.mask.assign(bytes.begin() + std::ptrdiff_t(h.payload_offset), bytes.end());

  if (kind == "full") {
    p.kind = PatternKind::full;
  } else if (kind.rfind("cols:", 0) == 0) {
    p.kind = PatternKind::columns;
    p.stride2 = int(std::stol(kind.substr(5)));
  } else if (kind.rfind("rows-cols:", 0) == 0) {
    const std::string rest = kind.substr(10);
    const auto comma = rest.find(',');
    if (comma == std::string::npos) throw data_error(path + ": malformed kind descriptor");
    p.kind = PatternKind::rows_cols;
    p.stride1 = int(std::stol(rest.substr(0, comma)));
    p.stride2 = int(std::stol(rest.substr(comma + 1)));
  } else if (kind == "explicit") {
    p.kind = PatternKind::explicit_mask;
  } else {
    throw data_error(path + ": unknown kind descriptor '" + kind + "'");
  }
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw data_error(path + ": " + e.what());
  }
  return p;
}

void write_pgm16(const std::string& path, const RealImage& image, double full_scale) {
  const int n = image.size();
  double scale = full_scale;
  if (scale <= 0.0)
    for (double v : image.values()) scale = std::max(scale, v);

  std::string out = "P5\n" + std::to_string(n) + " " + std::to_string(n) + "\n65535\n";
  for (double v : image.values()) {
    long g = 0;
    if (scale > 0.0) g = std::lround(std::min(std::max(v, 0.0), scale) / scale * 65535.0);
    out.push_back(char((g >> 8) & 0xff));
    out.push_back(char(g & 0xff));
  }
  dump(path, out);
}

RealImage read_pgm16(const std::string& path) {
  const std::string bytes = slurp(path);
  std::size_t pos = 0;
  auto token = [&]() {
    while (pos < bytes.size()) {
      if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (start == pos) throw data_error(path + ": truncated PGM header");
    return bytes.substr(start, pos - start);
  };

  if (token() != "P5") throw data_error(path + ": not a binary PGM file");
  long w, hgt, maxval;
  try {
    w = std::stol(token());
    hgt = std::stol(token());
    maxval = std::stol(token());
  } catch (const std::exception&) {
    throw data_error(path + ": malformed PGM header");
  }
  if (w != hgt) throw data_error(path + ": only square images are supported");
  if (w < 1 || maxval < 1 || maxval > 65535) throw data_error(path + ": invalid PGM header");
  ++pos;  // single whitespace after maxval

  const int bytes_per = maxval > 255 ? 2 : 1;
  const std::size_t want = std::size_t(w) * std::size_t(w) * std::size_t(bytes_per);
  if (bytes.size() - pos != want) throw data_error(path + ": PGM payload size mismatch");

  RealImage img{int(w)};
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + pos;
  for (auto& v : img.values()) {
    if (bytes_per == 2) {
      v = double((unsigned(p[0]) << 8) | unsigned(p[1]));
      p += 2;
    } else {
      v = double(*p++);
    }
  }
  return img;
}

void write_real_stack(const std::string& path, const RealImage& image) {
  KSpaceStack stack(image.size(), 1);
  for (std::size_t i = 0; i < image.pixels(); ++i)
    stack.coils[0][i] = cdouble(image[i], 0.0);
  write_stack(path, stack);
}

void write_image_auto(const std::string& path, const RealImage& image) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".pgm") == 0)
    write_pgm16(path, image);
  else
    write_real_stack(path, image);
}

RealImage read_image_auto(const std::string& path) {
  const std::string bytes = slurp(path);
  if (bytes.rfind("P5", 0) == 0) return read_pgm16(path);
  if (bytes.rfind(kStackMagic, 0) == 0) {
    const KSpaceStack stack = read_stack(path);
    if (stack.num_coils() != 1)
      throw data_error(path + ": expected a single-channel image, found " +
                       std::to_string(stack.num_coils()) + " coils");
    RealImage img(stack.n);
    for (std::size_t i = 0; i < img.pixels(); ++i) {
      if (stack.coils[0][i].imag() != 0.0)
        throw data_error(path + ": expected a real-valued image");
      img[i] = stack.coils[0][i].real();
    }
    return img;
  }
  throw data_error(path + ": unrecognized image file");
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void Report::add(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
}
void Report::add(const std::string& key, double value) { add(key, format_double(value)); }
void Report::add(const std::string& key, long value) { add(key, std::to_string(value)); }

std::string Report::str() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  return out;
}

void Report::write(const std::string& path) const { dump(path, str()); }

std::vector<std::pair<std::string, std::string>> read_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw data_error(path + ": malformed line '" + line + "'");
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

}  // namespace mocca
