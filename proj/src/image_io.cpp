#include "normint/image_io.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "normint/errors.hpp"

namespace normint {
namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

// Netpbm header token, skipping whitespace and '#' comments.
std::string token(std::istream& in) {
  std::string t;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (!std::isspace(c)) {
      t.push_back(static_cast<char>(c));
      break;
    }
  }
  while ((c = in.peek()) != EOF && !std::isspace(c)) t.push_back(static_cast<char>(in.get()));
  return t;
}

long parse_positive(const std::string& t, const char* what) {
  try {
    std::size_t used = 0;
    const long v = std::stol(t, &used);
    if (used != t.size() || v <= 0) throw IoError("");
    return v;
  } catch (const std::exception&) {
    throw IoError(std::string("malformed header: bad ") + what + " '" + t + "'");
  }
}

struct NetpbmHeader {
  int width, height, maxval;
};

NetpbmHeader read_netpbm_header(std::istream& in, const char* magic) {
  if (token(in) != magic) throw IoError(std::string("malformed header: expected ") + magic);
  NetpbmHeader h{};
  h.width = static_cast<int>(parse_positive(token(in), "width"));
  h.height = static_cast<int>(parse_positive(token(in), "height"));
  h.maxval = static_cast<int>(parse_positive(token(in), "maxval"));
  if (h.maxval > 255) throw IoError("only 8-bit netpbm images are supported");
  in.get();  // single whitespace before the raster
  return h;
}

std::uint32_t byteswap32(std::uint32_t x) {
  return (x >> 24) | ((x >> 8) & 0xff00u) | ((x << 8) & 0xff0000u) | (x << 24);
}

}  // namespace

Raster<float> read_pfm(std::istream& in) {
  std::string magic;
  std::getline(in, magic);
  if (!magic.empty() && magic.back() == '\r') magic.pop_back();
  if (magic != "Pf") {
    if (magic == "PF") throw IoError("colour PFM is not supported");
    throw IoError("malformed header: expected 'Pf'");
  }
  std::string dims, scale_line;
  std::getline(in, dims);
  std::getline(in, scale_line);
  std::istringstream ds(dims);
  long w = 0, h = 0;
  std::string rest;
  if (!(ds >> w >> h) || (ds >> rest) || w <= 0 || h <= 0)
    throw IoError("malformed header: bad dimensions '" + dims + "'");
  double scale = 0.0;
  try {
    std::size_t used = 0;
    scale = std::stod(scale_line, &used);
  } catch (const std::exception&) {
    throw IoError("malformed header: bad scale '" + scale_line + "'");
  }
  if (scale == 0.0 || !std::isfinite(scale)) throw IoError("malformed header: zero scale");
  const bool file_le = scale < 0.0;
  const bool host_le = std::endian::native == std::endian::little;

  Raster<float> r(static_cast<int>(h), static_cast<int>(w));
  std::vector<std::uint32_t> row(static_cast<std::size_t>(w));
  for (long k = 0; k < h; ++k) {
    in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(4 * w));
    if (in.gcount() != 4 * w) throw IoError("PFM size mismatch: truncated raster");
    const int u = static_cast<int>(h - 1 - k);  // bottom-to-top
    for (long v = 0; v < w; ++v) {
      std::uint32_t bits = row[v];
      if (file_le != host_le) bits = byteswap32(bits);
      float f;
      std::memcpy(&f, &bits, 4);
      r(u, static_cast<int>(v)) = f;
    }
  }
  if (in.peek() != EOF) throw IoError("PFM size mismatch: trailing data");
  return r;
}

Raster<float> read_pfm(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  return read_pfm(in);
}

void write_pfm(std::ostream& out, const Raster<float>& r) {
  out << "Pf\n" << r.width() << ' ' << r.height() << "\n-1.0\n";
  const bool host_le = std::endian::native == std::endian::little;
  std::vector<std::uint32_t> row(static_cast<std::size_t>(r.width()));
  for (int u = r.height() - 1; u >= 0; --u) {
    for (int v = 0; v < r.width(); ++v) {
      std::uint32_t bits;
      const float f = r(u, v);
      std::memcpy(&bits, &f, 4);
      row[v] = host_le ? bits : byteswap32(bits);
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(4 * row.size()));
  }
  if (!out) throw IoError("write failed");
}

void write_pfm(const std::filesystem::path& path, const Raster<float>& r) {
  std::ofstream out = open_out(path);
  write_pfm(out, r);
}

Raster<double> to_double(const Raster<float>& r) {
  Raster<double> d(r.height(), r.width());
  for (std::size_t i = 0; i < r.size(); ++i) d.data()[i] = r.data()[i];
  return d;
}

Raster<float> to_float(const Raster<double>& r) {
  Raster<float> f(r.height(), r.width());
  for (std::size_t i = 0; i < r.size(); ++i) f.data()[i] = static_cast<float>(r.data()[i]);
  return f;
}

Raster<std::uint8_t> read_pgm(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  const NetpbmHeader h = read_netpbm_header(in, "P5");
  Raster<std::uint8_t> r(h.height, h.width);
  in.read(reinterpret_cast<char*>(r.data().data()), static_cast<std::streamsize>(r.size()));
  if (static_cast<std::size_t>(in.gcount()) != r.size())
    throw IoError("PGM size mismatch: truncated raster");
  if (h.maxval != 255)
    for (auto& x : r.data()) x = static_cast<std::uint8_t>((x * 255 + h.maxval / 2) / h.maxval);
  return r;
}

void write_pgm(const std::filesystem::path& path, const Raster<std::uint8_t>& r) {
  std::ofstream out = open_out(path);
  out << "P5\n" << r.width() << ' ' << r.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(r.data().data()), static_cast<std::streamsize>(r.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

Raster<Rgb> read_ppm(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  const NetpbmHeader h = read_netpbm_header(in, "P6");
  Raster<Rgb> r(h.height, h.width);
  std::vector<std::uint8_t> buf(3 * r.size());
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (static_cast<std::size_t>(in.gcount()) != buf.size())
    throw IoError("PPM size mismatch: truncated raster");
  for (std::size_t i = 0; i < r.size(); ++i)
    for (int c = 0; c < 3; ++c) {
      int x = buf[3 * i + c];
      if (h.maxval != 255) x = (x * 255 + h.maxval / 2) / h.maxval;
      r.data()[i][c] = static_cast<std::uint8_t>(x);
    }
  return r;
}

void write_ppm(const std::filesystem::path& path, const Raster<Rgb>& r) {
  std::ofstream out = open_out(path);
  out << "P6\n" << r.width() << ' ' << r.height() << "\n255\n";
  for (const Rgb& px : r.data()) out.write(reinterpret_cast<const char*>(px.data()), 3);
  if (!out) throw IoError("write failed: " + path.string());
}

DomainMask read_mask(const std::filesystem::path& path) {
  Raster<std::uint8_t> img = read_pgm(path);
  for (auto& x : img.data()) x = x > 127 ? 1 : 0;
  return DomainMask(std::move(img));
}

void write_mask(const std::filesystem::path& path, const DomainMask& mask) {
  Raster<std::uint8_t> img(mask.height(), mask.width());
  for (int u = 0; u < mask.height(); ++u)
    for (int v = 0; v < mask.width(); ++v) img(u, v) = mask.inside(u, v) ? 255 : 0;
  write_pgm(path, img);
}

void write_obj(std::ostream& out, const Raster<double>& z, const DomainMask& mask) {
  Raster<std::int32_t> id(z.height(), z.width(), 0);
  std::int32_t next = 1;
  out << std::setprecision(9);
  for (int u = 0; u < z.height(); ++u)
    for (int v = 0; v < z.width(); ++v)
      if (mask.inside(u, v)) {
        id(u, v) = next++;
        out << "v " << v << ' ' << -u << ' ' << z(u, v) << '\n';
      }
  for (int u = 0; u + 1 < z.height(); ++u)
    for (int v = 0; v + 1 < z.width(); ++v) {
      // Corners counter-clockwise seen from +z: a=(u,v) b=(u+1,v) c=(u+1,v+1) d=(u,v+1).
      const std::int32_t a = id(u, v), b = id(u + 1, v), c = id(u + 1, v + 1), d = id(u, v + 1);
      const int inside = (a > 0) + (b > 0) + (c > 0) + (d > 0);
      if (inside == 4) {
        out << "f " << a << ' ' << b << ' ' << c << '\n';
        out << "f " << a << ' ' << c << ' ' << d << '\n';
      } else if (inside == 3) {
        std::int32_t t[3];
        int k = 0;
        for (std::int32_t x : {a, b, c, d})
          if (x > 0) t[k++] = x;
        out << "f " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
      }
    }
  if (!out) throw IoError("write failed");
}

void write_obj(const std::filesystem::path& path, const Raster<double>& z,
               const DomainMask& mask) {
  std::ofstream out = open_out(path);
  write_obj(out, z, mask);
}

}  // namespace normint
