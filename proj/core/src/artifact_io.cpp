#include "ggiw/artifact_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace ggiw {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.precision(17);
    return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& path) {
    out.close();
    if (!out) throw IoError("write failed for " + path.string());
}

// Rows of numeric fields after the header line.
std::vector<std::vector<double>> read_rows(const std::filesystem::path& path, std::size_t expected_columns) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw IoError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + cell + "'");
            }
        }
        if (row.size() != expected_columns) {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                          std::to_string(expected_columns) + " columns");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

template <typename T>
void grow(std::vector<T>& v, std::size_t index) {
    if (v.size() <= index) v.resize(index + 1);
}

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
    close_out(out, path);
}

void write_metrics_csv(std::span<const MetricsRecord> records, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "run,step,target,gwd,pos_err,ext_err\n";
    for (const auto& r : records) {
        out << r.run << ',' << r.step << ',' << r.target << ',' << r.gwd << ',' << std::sqrt(r.pos_err_sq) << ','
            << r.ext_err << '\n';
    }
    close_out(out, path);
}

std::vector<MetricsRecord> read_metrics_csv(const std::filesystem::path& path) {
    std::vector<MetricsRecord> out;
    for (const auto& row : read_rows(path, 6)) {
        out.push_back({static_cast<int>(row[0]), static_cast<int>(row[1]), static_cast<int>(row[2]), row[3],
                       row[4] * row[4], row[5]});
    }
    return out;
}

void write_frames_csv(std::span<const MeasurementFrame> frames, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "step,x,y,label\n";
    for (std::size_t k = 0; k < frames.size(); ++k) {
        const auto& f = frames[k];
        for (std::size_t j = 0; j < f.size(); ++j) {
            const int label = f.truth_labels.empty() ? -1 : f.truth_labels[j];
            out << k + 1 << ',' << f.points[j].x() << ',' << f.points[j].y() << ',' << label << '\n';
        }
    }
    close_out(out, path);
}

std::vector<MeasurementFrame> read_frames_csv(const std::filesystem::path& path) {
    std::vector<MeasurementFrame> out;
    for (const auto& row : read_rows(path, 4)) {
        const auto step = static_cast<std::size_t>(row[0]);
        if (step < 1) throw IoError(path.string() + ": steps start at 1");
        grow(out, step - 1);
        out[step - 1].points.emplace_back(row[1], row[2]);
        out[step - 1].truth_labels.push_back(static_cast<int>(row[3]));
    }
    for (auto& f : out) {
        bool unknown = false;
        for (int l : f.truth_labels) unknown = unknown || l < 0;
        if (unknown) f.truth_labels.clear();
    }
    return out;
}

void write_truth_csv(std::span<const GroundTruthTrack> truth, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "step,target,x,y,vx,vy,X00,X01,X11\n";
    const std::size_t steps = truth.empty() ? 0 : truth.front().center.size();
    for (std::size_t k = 0; k < steps; ++k) {
        for (std::size_t n = 0; n < truth.size(); ++n) {
            const auto& c = truth[n].center[k];
            const auto& v = truth[n].velocity[k];
            const auto& x = truth[n].extent[k];
            out << k << ',' << n << ',' << c.x() << ',' << c.y() << ',' << v.x() << ',' << v.y() << ',' << x(0, 0)
                << ',' << x(0, 1) << ',' << x(1, 1) << '\n';
        }
    }
    close_out(out, path);
}

std::vector<GroundTruthTrack> read_truth_csv(const std::filesystem::path& path) {
    std::vector<GroundTruthTrack> out;
    for (const auto& row : read_rows(path, 9)) {
        const auto n = static_cast<std::size_t>(row[1]);
        grow(out, n);
        auto& t = out[n];
        t.center.emplace_back(row[2], row[3]);
        t.velocity.emplace_back(row[4], row[5]);
        Mat2 x;
        x << row[6], row[7], row[7], row[8];
        t.extent.push_back(x);
    }
    return out;
}

EllipseShape ellipse_shape(const Mat2& extent) {
    Eigen::SelfAdjointEigenSolver<Mat2> es(symmetrized(extent));
    const Vec2 major = es.eigenvectors().col(1);
    return {2.0 * std::sqrt(std::max(es.eigenvalues()(1), 0.0)), 2.0 * std::sqrt(std::max(es.eigenvalues()(0), 0.0)),
            std::atan2(major.y(), major.x())};
}

void write_estimates_csv(std::span<const std::vector<GgiwState>> estimates, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "step,target,m0,m1,m2,m3";
    for (int i = 0; i < 4; ++i) {
        for (int k = 0; k < 4; ++k) out << ",P" << i << k;
    }
    out << ",v,V00,V01,V11,alpha,beta,X00,X01,X11,l1,l2,theta\n";
    for (std::size_t k = 0; k < estimates.size(); ++k) {
        for (std::size_t n = 0; n < estimates[k].size(); ++n) {
            const auto& s = estimates[k][n];
            out << k + 1 << ',' << n;
            for (int i = 0; i < 4; ++i) out << ',' << s.m(i);
            for (int i = 0; i < 4; ++i) {
                for (int c = 0; c < 4; ++c) out << ',' << s.P(i, c);
            }
            const Mat2 x = s.extent_mean();
            const auto e = ellipse_shape(x);
            out << ',' << s.v << ',' << s.V(0, 0) << ',' << s.V(0, 1) << ',' << s.V(1, 1) << ',' << s.alpha << ','
                << s.beta << ',' << x(0, 0) << ',' << x(0, 1) << ',' << x(1, 1) << ',' << e.l1 << ',' << e.l2 << ','
                << e.theta << '\n';
        }
    }
    close_out(out, path);
}

std::vector<std::vector<GgiwState>> read_estimates_csv(const std::filesystem::path& path) {
    std::vector<std::vector<GgiwState>> out;
    for (const auto& row : read_rows(path, 2 + 4 + 16 + 6 + 6)) {
        const auto step = static_cast<std::size_t>(row[0]);
        const auto n = static_cast<std::size_t>(row[1]);
        if (step < 1) throw IoError(path.string() + ": steps start at 1");
        grow(out, step - 1);
        grow(out[step - 1], n);
        GgiwState& s = out[step - 1][n];
        for (int i = 0; i < 4; ++i) s.m(i) = row[static_cast<std::size_t>(2 + i)];
        for (int i = 0; i < 16; ++i) s.P(i / 4, i % 4) = row[static_cast<std::size_t>(6 + i)];
        s.v = row[22];
        s.V << row[23], row[24], row[24], row[25];
        s.alpha = row[26];
        s.beta = row[27];
    }
    return out;
}

}  // namespace ggiw
