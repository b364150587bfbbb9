#pragma once

#include <string>
#include <vector>

#include "sphot/gof.hpp"
#include "sphot/manova.hpp"
#include "sphot/models.hpp"
#include "sphot/transport.hpp"

namespace sphot::io {

/// Parses a dataset CSV: either d numeric columns of direction cosines per
/// row, or (d = 3 only) two columns with header "lon,lat" in degrees.
/// Rows that fail the unit-norm tolerance are reported with their line
/// number.
Sample read_dataset(const std::string& path);

void write_dataset(const std::string& path, const Sample& sample);

std::string format_double(double x);

/// Stable-key-order JSON for the fitted transport (sample, images, ranks,
/// signs, pole, factorization, total cost).
std::string transport_to_json(const transport::EmpiricalTransport& t);

/// Rebuilds a fitted transport from its JSON form.
transport::EmpiricalTransport transport_from_json(const std::string& text);

std::string gof_report_to_json(const gof::GofReport& rep);
std::string manova_report_to_json(const manova::ManovaReport& rep);

/// RFC-4180-style CSV writer: '.' decimal separator, LF line endings.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace sphot::io
