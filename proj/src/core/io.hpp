#pragma once

#include <string>
#include <vector>

#include "bounds.hpp"
#include "channel.hpp"
#include "codebook.hpp"
#include "density.hpp"
#include "rates.hpp"

namespace mismatch {

// Shortest-round-trip decimal form (up to 17 significant digits).
std::string format_double(double v);

// Problem files: {"input_size": L, "output_size": J, "W": [[...]...],
// "q": [[...]...], "name": optional}. Matrices may also be flat arrays.
ProblemPair load_problem(const std::string& path);
ProblemPair parse_problem(const std::string& text);

std::string codebook_to_json(const Codebook& cb);
Codebook codebook_from_json(const std::string& text);
void save_codebook(const Codebook& cb, const std::string& path);
Codebook load_codebook(const std::string& path);

// "value,prob" header, one atom per line, increasing values.
std::string spectrum_to_csv(const SpectrumPmf& pmf);

std::string rate_result_to_json(const RateResult& r);

std::string sandwich_to_csv(const std::vector<SandwichRow>& rows);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace mismatch
