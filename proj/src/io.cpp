#include "nskw/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nskw {
namespace {

const char kMagic[5] = {'N', 'S', 'K', 'W', '1'};

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_i64(std::string& out, std::int64_t v) { put_u64(out, static_cast<std::uint64_t>(v)); }

void put_f64(std::string& out, double x) {
  std::uint64_t v;
  std::memcpy(&v, &x, 8);
  put_u64(out, v);
}

struct Reader {
  const std::string& buf;
  size_t pos = 0;
  const std::string& path;

  void need(size_t n) const {
    if (pos + n > buf.size()) throw std::invalid_argument("truncated checkpoint: " + path);
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
    }
    pos += 8;
    return v;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() {
    const std::uint64_t v = u64();
    double x;
    std::memcpy(&x, &v, 8);
    return x;
  }
};

std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_checkpoint(const std::string& path, const SimConfig& cfg, const State& s) {
  std::string out;
  out.append(kMagic, sizeof kMagic);
  put_i64(out, cfg.d);
  put_i64(out, cfg.n);
  put_f64(out, s.t);
  put_f64(out, cfg.kappa);
  put_f64(out, cfg.eps);
  put_f64(out, cfg.nu);
  put_f64(out, cfg.q);
  put_f64(out, cfg.pressure_law.gamma);
  put_f64(out, cfg.pressure_law.a_p);
  put_f64(out, cfg.pressure_law.rho_bar);
  for (double v : s.rho.values) put_f64(out, v);
  for (int c = 0; c < cfg.d; ++c) {
    for (double v : s.m[c].values) put_f64(out, v);
  }
  write_text_file(path, out);
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open checkpoint: " + path);
  std::ostringstream content;
  content << f.rdbuf();
  const std::string buf = content.str();

  if (buf.size() < sizeof kMagic || std::memcmp(buf.data(), kMagic, sizeof kMagic) != 0) {
    throw std::invalid_argument("not a checkpoint file: " + path);
  }
  Reader r{buf, sizeof kMagic, path};

  Checkpoint ck;
  const std::int64_t d = r.i64();
  const std::int64_t n = r.i64();
  if (d != 1 && d != 2) throw std::invalid_argument("corrupt checkpoint (d): " + path);
  if (n < 8 || n > (1 << 20) || (n & (n - 1)) != 0) {
    throw std::invalid_argument("corrupt checkpoint (n): " + path);
  }
  ck.cfg.d = static_cast<int>(d);
  ck.cfg.n = static_cast<int>(n);
  const double t = r.f64();
  ck.cfg.kappa = r.f64();
  ck.cfg.eps = r.f64();
  ck.cfg.nu = r.f64();
  ck.cfg.q = r.f64();
  const double gamma = r.f64();
  const double a_p = r.f64();
  const double rho_bar = r.f64();
  try {
    ck.cfg.pressure_law = PressureLaw(a_p, gamma, rho_bar);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("corrupt checkpoint (" + std::string(e.what()) + "): " + path);
  }

  const Grid g = ck.cfg.grid();
  const size_t total = static_cast<size_t>(g.size());
  r.need(total * 8 * static_cast<size_t>(1 + d));
  ck.state = State(g);
  ck.state.t = t;
  for (size_t i = 0; i < total; ++i) ck.state.rho.values[i] = r.f64();
  for (int c = 0; c < ck.cfg.d; ++c) {
    for (size_t i = 0; i < total; ++i) ck.state.m[c].values[i] = r.f64();
  }
  if (r.pos != buf.size()) throw std::invalid_argument("trailing bytes in checkpoint: " + path);
  return ck;
}

std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& rows) {
  std::string out = "t,mass,energy,diss_S,diss_nu,diss_kw,diss_p,rel_entropy,gronwall_rhs,margin\n";
  for (const DiagnosticsRecord& r : rows) {
    out += fmt17(r.t);
    for (double v : {r.mass, r.energy, r.diss_S, r.diss_nu, r.diss_kw, r.diss_p, r.rel_entropy,
                     r.gronwall_rhs, r.margin}) {
      out += ',';
      out += fmt17(v);
    }
    out += '\n';
  }
  return out;
}

std::string svg_line_plot(const std::string& title, const std::vector<double>& x,
                          const std::vector<std::pair<std::string, std::vector<double>>>& series) {
  const double W = 720, H = 440, L = 70, R = 20, T = 46, B = 50;
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool any = false;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) continue;
    for (const auto& s : series) {
      if (i >= s.second.size() || !std::isfinite(s.second[i])) continue;
      if (!any) {
        xmin = xmax = x[i];
        ymin = ymax = s.second[i];
        any = true;
      } else {
        xmin = std::min(xmin, x[i]);
        xmax = std::max(xmax, x[i]);
        ymin = std::min(ymin, s.second[i]);
        ymax = std::max(ymax, s.second[i]);
      }
    }
  }
  if (xmax - xmin <= 0) xmax = xmin + 1;
  const double pad = (ymax - ymin > 0) ? 0.05 * (ymax - ymin) : std::max(1.0, std::abs(ymax));
  ymin -= pad;
  ymax += pad;

  auto px = [&](double v) { return L + (v - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double v) { return H - B - (v - ymin) / (ymax - ymin) * (H - T - B); };
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
                "viewBox=\"0 0 %g %g\" font-family=\"sans-serif\" font-size=\"12\">\n",
                W, H, W, H);
  out += buf;
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"22\" font-size=\"15\">%s</text>\n", L,
                title.c_str());
  out += buf;

  for (int k = 0; k <= 4; ++k) {
    const double xv = xmin + k * (xmax - xmin) / 4.0;
    const double yv = ymin + k * (ymax - ymin) / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"#ddd\"/>\n", px(xv),
                  py(ymin), px(xv), py(ymax));
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"#ddd\"/>\n", px(xmin),
                  py(yv), px(xmax), py(yv));
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%.4g</text>\n", px(xv),
                  H - B + 18, xv);
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" text-anchor=\"end\">%.4g</text>\n", L - 6,
                  py(yv) + 4, yv);
    out += buf;
  }
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" "
                "stroke=\"#333\"/>\n",
                L, T, W - L - R, H - T - B);
  out += buf;

  for (size_t si = 0; si < series.size(); ++si) {
    const char* color = colors[si % 5];
    std::string seg;
    auto flush = [&] {
      if (!seg.empty()) {
        out += "<polyline fill=\"none\" stroke=\"";
        out += color;
        out += "\" stroke-width=\"1.5\" points=\"" + seg + "\"/>\n";
        seg.clear();
      }
    };
    for (size_t i = 0; i < x.size() && i < series[si].second.size(); ++i) {
      const double yv = series[si].second[i];
      if (!std::isfinite(x[i]) || !std::isfinite(yv)) {
        flush();
        continue;
      }
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(x[i]), py(yv));
      seg += buf;
    }
    flush();
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%g\" y=\"%g\" width=\"12\" height=\"12\" fill=\"%s\"/>"
                  "<text x=\"%g\" y=\"%g\">%s</text>\n",
                  W - R - 170.0, T + 8 + 18.0 * si, color, W - R - 152.0, T + 18 + 18.0 * si,
                  series[si].first.c_str());
    out += buf;
  }
  out += "</svg>\n";
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write file: " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  f.flush();
  if (!f) throw std::runtime_error("write failed: " + path);
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory: " + dir + " (" + ec.message() + ")");
}

}  // namespace nskw
