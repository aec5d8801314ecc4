// Copyright 2026 The vapeval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VAPEVAL_CSV_H_
#define VAPEVAL_CSV_H_

// Minimal RFC 4180 CSV helpers and locale-independent number formatting
// shared by every emitted report.

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace vapeval {

// Shortest decimal form that round-trips to the same double.
std::string format_number(double value);

// Quotes a field if it contains a comma, quote, or line break.
std::string csv_escape(std::string_view field);

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);
void write_csv_row(std::ostream& out,
                   std::initializer_list<std::string_view> fields);

// Parses CSV text into rows. Lines starting with '#' outside quotes are
// skipped, as are blank lines. Throws InputError on an unterminated quote.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace vapeval

#endif  // VAPEVAL_CSV_H_
