#pragma once

#include <string>

#include "pottsrec/admm.hpp"
#include "pottsrec/image.hpp"
#include "pottsrec/operators.hpp"

namespace pottsrec {

// Images travel as CSV (17 significant digits, lossless) with a JSON sidecar
// <path>.json carrying {width, height, channels}. Sinograms are CSV with rows
// = angles and a geometry sidecar.

void write_image_csv(const std::string& path, const Image& img);
Image read_image_csv(const std::string& path);

void write_volume_csv(const std::string& path, const DataVolume& f);
DataVolume read_volume_csv(const std::string& path);

void write_radon_geometry(const std::string& path, const RadonGeometry& g, int image_size);
RadonGeometry read_radon_geometry(const std::string& path, int* image_size);

void write_spherical_geometry(const std::string& path, const SphericalGeometry& g, int image_size);
SphericalGeometry read_spherical_geometry(const std::string& path, int* image_size);

/// 8-bit grayscale PGM, values scaled from [min, max] of the image.
void write_pgm(const std::string& path, const Image& img);

/// 8-bit RGB PNG; single-channel images are replicated to gray.
void write_png(const std::string& path, const Image& img);

/// Label map as PNG with a fixed deterministic palette keyed by label index.
void write_label_png(const std::string& path, const LabelMap& labels);

void write_labels_csv(const std::string& path, const LabelMap& labels);
LabelMap read_labels_csv(const std::string& path);

}  // namespace pottsrec
