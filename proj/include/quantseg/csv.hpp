#pragma once

#include <iosfwd>
#include <string>

#include "quantseg/types.hpp"

namespace quantseg {

// Dataset CSV format: header "y,x1,...,xp", then one observation per line.
// Any malformed cell is a CsvError carrying the 1-based line number.

Dataset read_dataset_csv(std::istream& in, const std::string& name = "<stream>");
Dataset read_dataset_csv_file(const std::string& path);

void write_dataset_csv(std::ostream& out, const Dataset& data);
void write_dataset_csv_file(const std::string& path, const Dataset& data);

}  // namespace quantseg
