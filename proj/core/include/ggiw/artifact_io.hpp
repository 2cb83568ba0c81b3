#pragma once

// CSV artifacts. Column schemas:
//   metrics.csv   run,step,target,gwd,pos_err,ext_err   (pos_err = Euclidean error)
//   frames.csv    step,x,y,label                        (label -1 when unknown)
//   truth.csv     step,target,x,y,vx,vy,X00,X01,X11
//   estimates.csv step,target,m0..m3,P00..P33,v,V00,V01,V11,alpha,beta,X00,X01,X11,l1,l2,theta
// where X is the extent mean and (l1, l2, theta) its full axes and orientation.

#include <filesystem>
#include <span>
#include <vector>

#include "ggiw/metrics.hpp"

namespace ggiw {

/// Thrown for unreadable or unwritable files; the message names the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_metrics_csv(std::span<const MetricsRecord> records, const std::filesystem::path& path);
[[nodiscard]] std::vector<MetricsRecord> read_metrics_csv(const std::filesystem::path& path);

/// frames[k-1] is step k.
void write_frames_csv(std::span<const MeasurementFrame> frames, const std::filesystem::path& path);
[[nodiscard]] std::vector<MeasurementFrame> read_frames_csv(const std::filesystem::path& path);

void write_truth_csv(std::span<const GroundTruthTrack> truth, const std::filesystem::path& path);
[[nodiscard]] std::vector<GroundTruthTrack> read_truth_csv(const std::filesystem::path& path);

/// estimates[k-1] holds every target's posterior at step k.
void write_estimates_csv(std::span<const std::vector<GgiwState>> estimates, const std::filesystem::path& path);
[[nodiscard]] std::vector<std::vector<GgiwState>> read_estimates_csv(const std::filesystem::path& path);

/// Full axes (l1 >= l2) and orientation of an extent matrix; inverse of extent_from_shape.
struct EllipseShape {
    double l1;
    double l2;
    double theta;
};
[[nodiscard]] EllipseShape ellipse_shape(const Mat2& extent);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace ggiw
