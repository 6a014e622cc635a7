#ifndef MAGOSC_SVG_HPP
#define MAGOSC_SVG_HPP

#include <magosc/dynamics.hpp>

#include <algorithm>
#include <ostream>
#include <vector>

namespace magosc {

// minimal polyline plot: x-y pane on the left, x-z pane on the right
inline void write_trajectory_svg(std::ostream& os, const std::vector<Sample>& samples) {
    constexpr double pane = 400.0, margin = 30.0;

    auto emit_pane = [&](double x_off, int xi, int yi, const char* label) {
        double lo_x = samples.front().state[xi], hi_x = lo_x;
        double lo_y = samples.front().state[yi], hi_y = lo_y;
        for (const auto& s : samples) {
            lo_x = std::min(lo_x, s.state[xi]);
            hi_x = std::max(hi_x, s.state[xi]);
            lo_y = std::min(lo_y, s.state[yi]);
            hi_y = std::max(hi_y, s.state[yi]);
        }
        const double span_x = std::max(hi_x - lo_x, 1e-12);
        const double span_y = std::max(hi_y - lo_y, 1e-12);
        const double scale = (pane - 2 * margin) / std::max(span_x, span_y);
        os << "<rect x=\"" << x_off << "\" y=\"0\" width=\"" << pane << "\" height=\"" << pane
           << "\" fill=\"none\" stroke=\"#ccc\"/>\n";
        os << "<text x=\"" << x_off + 10 << "\" y=\"20\" font-size=\"14\">" << label
           << "</text>\n<polyline fill=\"none\" stroke=\"#205080\" stroke-width=\"1\" points=\"";
        for (const auto& s : samples) {
            const double px = x_off + margin + (s.state[xi] - lo_x) * scale;
            const double py = pane - margin - (s.state[yi] - lo_y) * scale;
            os << px << ',' << py << ' ';
        }
        os << "\"/>\n";
    };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 2 * pane + margin
       << "\" height=\"" << pane << "\">\n";
    emit_pane(0.0, 0, 1, "x-y");
    emit_pane(pane + margin, 0, 2, "x-z");
    os << "</svg>\n";
}

}  // namespace magosc

#endif
