#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "latt/autotype.hpp"
#include "latt/gluesearch.hpp"

namespace latt {

// Lattice files:
//
//   latt-lattice 1
//   label e8
//   dim 8
//   ambient 8
//   denominator 2
//   basis
//   <dim rows of ambient integers>
//   ambient_form identity | ambient_form followed by ambient rows
//
// All numerators share the denominator. A token starting with '#' begins a comment.
std::string emit_lattice(const Lattice& l);
Lattice parse_lattice(std::string_view text);

// Integer matrices in lattice coordinates ("latt-matrix 1", rows, cols, entries).
// A file may hold several blocks; isometry and sigma files hold exactly one.
std::string emit_matrix(const IntMatrix& m);
std::vector<IntMatrix> parse_matrices(std::string_view text);

// Hermitian matrices over Z[zeta_p]:
//   latt-hermitian 1
//   p 5
//   size z
//   <z*z entries, each p-1 integer coefficients of 1, zeta, ..., zeta^(p-2)>
std::string emit_hermitian(const CyclotomicMatrix& h);
CyclotomicMatrix parse_hermitian(std::string_view text);

// Glue-search configuration (JSON). Lattice paths are relative to the config file.
struct SearchConfigFile {
  SearchConfig config;
  std::optional<Lattice> expect_isometric_to;
  std::string expect_label;
};
SearchConfigFile parse_search_config(std::string_view json_text, const std::filesystem::path& base_dir);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);
Lattice load_lattice(const std::filesystem::path& path);
SearchConfigFile load_search_config(const std::filesystem::path& path);

}  // namespace latt
