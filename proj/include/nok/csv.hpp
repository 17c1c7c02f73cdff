#ifndef NOK_CSV_HPP
#define NOK_CSV_HPP

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace nok {

// 17 significant digits: enough for bit-exact double round trips.
std::string format_double(double v);

// One CSV row of already-formatted cells.
void write_csv_row(std::ostream& os, const std::vector<std::string>& cells);

// Line-oriented key=value text with '#' comments.
std::map<std::string, std::string> parse_key_value_file(const std::string& path);
void write_key_value(std::ostream& os, const std::string& key, const std::string& value);

}  // namespace nok

#endif
