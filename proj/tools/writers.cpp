#include "writers.hpp"

#include <array>
#include <charconv>
#include <map>

namespace jetgeom::cli {

std::string format_real(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), ptr);
}

namespace {

std::string format_fixed(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 3);
  std::string s(buf.data(), ptr);
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const std::size_t n = traj.dimension();
  out << 't';
  for (char prefix : {'x', 'v', 'a'})
    for (std::size_t i = 1; i <= n; ++i) out << ',' << prefix << i;
  out << '\n';
  for (std::size_t j = 0; j < traj.size(); ++j) {
    out << format_real(traj.time(j));
    for (double x : traj.state(j)) out << ',' << format_real(x);
    for (double v : traj.velocity(j)) out << ',' << format_real(v);
    if (traj.has_accelerations())
      for (double a : traj.acceleration(j)) out << ',' << format_real(a);
    out << '\n';
  }
}

void write_segments_csv(std::ostream& out, const LevelSet& ls) {
  out << "x1a,x2a,x1b,x2b\n";
  for (const auto& s : ls.segments) {
    out << format_real(s[0][0]) << ',' << format_real(s[0][1]) << ',' << format_real(s[1][0]) << ','
        << format_real(s[1][1]) << '\n';
  }
}

std::vector<std::vector<Point2>> chain_segments(const std::vector<std::array<Point2, 2>>& segments) {
  std::map<Point2, std::vector<std::size_t>> touching;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    touching[segments[s][0]].push_back(s);
    touching[segments[s][1]].push_back(s);
  }
  std::vector<char> used(segments.size(), 0);
  std::vector<std::vector<Point2>> chains;

  auto extend = [&](std::vector<Point2>& chain) {
    for (;;) {
      const Point2 tail = chain.back();
      bool grown = false;
      for (std::size_t s : touching[tail]) {
        if (used[s]) continue;
        used[s] = 1;
        chain.push_back(segments[s][0] == tail ? segments[s][1] : segments[s][0]);
        grown = true;
        break;
      }
      if (!grown) return;
    }
  };

  // Open chains first, started from a dangling endpoint.
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t s = 0; s < segments.size(); ++s) {
      if (used[s]) continue;
      Point2 a = segments[s][0], b = segments[s][1];
      if (pass == 0) {
        if (touching[b].size() == 1) std::swap(a, b);
        if (touching[a].size() != 1) continue;
      }
      used[s] = 1;
      std::vector<Point2> chain{a, b};
      extend(chain);
      chains.push_back(std::move(chain));
    }
  }
  return chains;
}

void write_segments_svg(std::ostream& out, const LevelSet& ls, const SvgAxes& axes) {
  constexpr double size = 480.0, margin = 48.0;
  const double total = size + 2 * margin;
  auto px = [&](double x) { return margin + (x - axes.x.lo) / (axes.x.hi - axes.x.lo) * size; };
  auto py = [&](double y) { return margin + (axes.y.hi - y) / (axes.y.hi - axes.y.lo) * size; };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << format_fixed(total)
      << "\" height=\"" << format_fixed(total) << "\" viewBox=\"0 0 " << format_fixed(total) << ' '
      << format_fixed(total) << "\">\n";
  out << "<!-- level " << format_real(ls.level) << ", " << ls.segments.size() << " segments -->\n";
  out << "<rect x=\"" << format_fixed(margin) << "\" y=\"" << format_fixed(margin) << "\" width=\""
      << format_fixed(size) << "\" height=\"" << format_fixed(size)
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  out << "<text x=\"" << format_fixed(margin) << "\" y=\"" << format_fixed(margin + size + 16)
      << "\" text-anchor=\"middle\">" << format_real(axes.x.lo) << "</text>\n";
  out << "<text x=\"" << format_fixed(margin + size) << "\" y=\"" << format_fixed(margin + size + 16)
      << "\" text-anchor=\"middle\">" << format_real(axes.x.hi) << "</text>\n";
  out << "<text x=\"" << format_fixed(margin + size / 2) << "\" y=\"" << format_fixed(margin + size + 32)
      << "\" text-anchor=\"middle\">" << xml_escape(axes.x_label) << "</text>\n";
  out << "<text x=\"" << format_fixed(margin - 6) << "\" y=\"" << format_fixed(margin + size)
      << "\" text-anchor=\"end\">" << format_real(axes.y.lo) << "</text>\n";
  out << "<text x=\"" << format_fixed(margin - 6) << "\" y=\"" << format_fixed(margin + 4)
      << "\" text-anchor=\"end\">" << format_real(axes.y.hi) << "</text>\n";
  out << "<text x=\"" << format_fixed(margin - 30) << "\" y=\"" << format_fixed(margin + size / 2)
      << "\" text-anchor=\"middle\">" << xml_escape(axes.y_label) << "</text>\n";
  out << "</g>\n";
  out << "<g fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1\">\n";
  for (const auto& chain : chain_segments(ls.segments)) {
    out << "<polyline points=\"";
    for (std::size_t i = 0; i < chain.size(); ++i) {
      if (i) out << ' ';
      out << format_fixed(px(chain[i][0])) << ',' << format_fixed(py(chain[i][1]));
    }
    out << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
}

void write_mesh_obj(std::ostream& out, const LevelSet& ls) {
  out << "# level " << format_real(ls.level) << '\n';
  out << "# " << ls.vertices.size() << " vertices, " << ls.triangles.size() << " triangles\n";
  for (const auto& v : ls.vertices)
    out << "v " << format_real(v[0]) << ' ' << format_real(v[1]) << ' ' << format_real(v[2]) << '\n';
  for (const auto& t : ls.triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

}  // namespace jetgeom::cli
