#include "ggiw/dbscan.hpp"

#include <deque>

namespace ggiw {

namespace {

std::vector<int> neighbours(std::span<const Vec2> points, std::size_t i, double eps_sq) {
    std::vector<int> out;
    for (std::size_t j = 0; j < points.size(); ++j) {
        if ((points[j] - points[i]).squaredNorm() <= eps_sq) out.push_back(static_cast<int>(j));
    }
    return out;
}

}  // namespace

std::vector<int> dbscan(std::span<const Vec2> points, double eps, int min_pts) {
    constexpr int kUnvisited = -2;
    std::vector<int> label(points.size(), kUnvisited);
    const double eps_sq = eps * eps;
    int next_cluster = 0;

    for (std::size_t i = 0; i < points.size(); ++i) {
        if (label[i] != kUnvisited) continue;
        auto seeds = neighbours(points, i, eps_sq);
        if (static_cast<int>(seeds.size()) < min_pts) {
            label[i] = kDbscanNoise;
            continue;
        }
        const int cluster = next_cluster++;
        label[i] = cluster;
        std::deque<int> frontier(seeds.begin(), seeds.end());
        while (!frontier.empty()) {
            const int j = frontier.front();
            frontier.pop_front();
            if (label[j] == kDbscanNoise) label[j] = cluster;  // border point
            if (label[j] != kUnvisited) continue;
            label[j] = cluster;
            auto more = neighbours(points, static_cast<std::size_t>(j), eps_sq);
            if (static_cast<int>(more.size()) >= min_pts) {
                frontier.insert(frontier.end(), more.begin(), more.end());
            }
        }
    }
    return label;
}

}  // namespace ggiw
