#include "bvn/svg.hpp"

#include <algorithm>
#include <sstream>

#include "bvn/text.hpp"

namespace bvn {

namespace {

constexpr int kPitch = 36;   // horizontal distance between wires
constexpr int kRow = 44;     // vertical distance per slice
constexpr int kMargin = 30;

int wire_x(int pos) { return kMargin + (pos - 1) * kPitch; }

void line(std::ostringstream& os, int x1, int y1, int x2, int y2) {
  os << "  <line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2
     << "\"/>\n";
}

// A straight segment with a gap in the middle, for the under strand.
void broken_line(std::ostringstream& os, int x1, int y1, int x2, int y2) {
  auto lerp = [](int a, int b, int num, int den) { return a + (b - a) * num / den; };
  line(os, x1, y1, lerp(x1, x2, 2, 5), lerp(y1, y2, 2, 5));
  line(os, lerp(x1, x2, 3, 5), lerp(y1, y2, 3, 5), x2, y2);
}

}  // namespace

std::string render_svg(const Diagram& d) {
  const int n = d.arity;
  auto prof = wire_profile(d);
  int max_wires = 1;
  for (int w : prof) max_wires = std::max(max_wires, w);
  const int width = 2 * kMargin + (max_wires - 1) * kPitch;
  const int height = 2 * kMargin + static_cast<int>(d.slices.size() + 1) * kRow;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  os << "<g stroke=\"black\" stroke-width=\"2\" fill=\"none\">\n";

  // Source stubs.
  for (int p = 1; p <= d.sources; ++p)
    line(os, wire_x(p), kMargin - 14, wire_x(p), kMargin);

  int y = kMargin;
  for (size_t t = 0; t < d.slices.size(); ++t) {
    const Slice& s = d.slices[t];
    const int wires = prof[t];
    const int y2 = y + kRow;
    switch (s.kind) {
      case SliceKind::Split: {
        for (int p = 1; p <= wires; ++p) {
          if (p < s.pos) line(os, wire_x(p), y, wire_x(p), y2);
          if (p > s.pos) line(os, wire_x(p), y, wire_x(p + n - 1), y2);
        }
        const int mid = y + kRow / 3;
        line(os, wire_x(s.pos), y, wire_x(s.pos), mid);
        for (int k = 0; k < n; ++k) line(os, wire_x(s.pos), mid, wire_x(s.pos + k), y2);
        os << "  <circle cx=\"" << wire_x(s.pos) << "\" cy=\"" << mid
           << "\" r=\"3\" fill=\"black\"/>\n";
        break;
      }
      case SliceKind::Merge: {
        for (int p = 1; p <= wires; ++p) {
          if (p < s.pos) line(os, wire_x(p), y, wire_x(p), y2);
          if (p >= s.pos + n) line(os, wire_x(p), y, wire_x(p - n + 1), y2);
        }
        const int mid = y + 2 * kRow / 3;
        for (int k = 0; k < n; ++k) line(os, wire_x(s.pos + k), y, wire_x(s.pos), mid);
        line(os, wire_x(s.pos), mid, wire_x(s.pos), y2);
        os << "  <circle cx=\"" << wire_x(s.pos) << "\" cy=\"" << mid
           << "\" r=\"3\" fill=\"black\"/>\n";
        break;
      }
      case SliceKind::Cross: {
        for (int p = 1; p <= wires; ++p)
          if (p != s.pos && p != s.pos + 1) line(os, wire_x(p), y, wire_x(p), y2);
        // Positive: the left strand passes over.
        if (s.sign > 0) {
          broken_line(os, wire_x(s.pos + 1), y, wire_x(s.pos), y2);
          line(os, wire_x(s.pos), y, wire_x(s.pos + 1), y2);
        } else {
          broken_line(os, wire_x(s.pos), y, wire_x(s.pos + 1), y2);
          line(os, wire_x(s.pos + 1), y, wire_x(s.pos), y2);
        }
        break;
      }
      case SliceKind::White: {
        for (int p = 1; p <= wires; ++p)
          if (p != s.pos) line(os, wire_x(p), y, wire_x(p), y2);
        const int cy = y + kRow / 2;
        line(os, wire_x(s.pos), y, wire_x(s.pos), cy - 9);
        line(os, wire_x(s.pos), cy + 9, wire_x(s.pos), y2);
        os << "  <circle cx=\"" << wire_x(s.pos) << "\" cy=\"" << cy
           << "\" r=\"9\" fill=\"white\"/>\n";
        os << "  <text x=\"" << wire_x(s.pos) + 12 << "\" y=\"" << cy + 4
           << "\" font-size=\"11\" fill=\"black\" stroke=\"none\">"
           << format_label(s.label, *d.spec) << "</text>\n";
        break;
      }
    }
    y = y2;
  }
  // Sink stubs.
  for (int p = 1; p <= prof.back(); ++p) line(os, wire_x(p), y, wire_x(p), y + 14);
  os << "</g>\n</svg>\n";
  return os.str();
}

std::string render_svg(const Element& v) { return render_svg(from_element(v)); }

}  // namespace bvn
