#include "qnc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace qnc {

namespace {

double parse_double(const std::string& token, std::size_t line_no) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw std::runtime_error("csv parse error at line " + std::to_string(line_no) +
                                 ": bad number '" + token + "'");
    }
    return v;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

std::vector<std::string> LabeledDataset::distinct_labels() const {
    std::vector<std::string> out = labels;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("failed to format double");
    return std::string(buf, ptr);
}

LabeledDataset load_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("'" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::size_t dims = 0;
    if (line == "x1,x2,label") {
        dims = 2;
    } else if (line == "x1,x2,x3,x4,label") {
        dims = 4;
    } else {
        throw std::runtime_error("csv parse error at line 1: unrecognized header '" + line + "'");
    }

    LabeledDataset ds;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != dims + 1) {
            throw std::runtime_error("csv parse error at line " + std::to_string(line_no) +
                                     ": expected " + std::to_string(dims + 1) + " fields, got " +
                                     std::to_string(fields.size()));
        }
        std::vector<double> v(dims);
        for (std::size_t d = 0; d < dims; ++d) v[d] = parse_double(fields[d], line_no);
        if (fields[dims].empty()) {
            throw std::runtime_error("csv parse error at line " + std::to_string(line_no) +
                                     ": empty label");
        }
        ds.vectors.push_back(std::move(v));
        ds.labels.push_back(fields[dims]);
    }
    if (ds.vectors.empty()) throw std::runtime_error("'" + path + "' contains no data rows");
    return ds;
}

void save_csv(const LabeledDataset& ds, const std::string& path) {
    if (ds.vectors.size() != ds.labels.size()) {
        throw std::invalid_argument("dataset vectors and labels differ in length");
    }
    if (ds.vectors.empty()) throw std::invalid_argument("refusing to write an empty dataset");
    const std::size_t dims = ds.dims();
    if (dims != 2 && dims != 4) {
        throw std::invalid_argument("csv supports 2d or 4d vectors, got " + std::to_string(dims));
    }

    std::ostringstream out;
    out << (dims == 2 ? "x1,x2,label" : "x1,x2,x3,x4,label") << '\n';
    for (std::size_t i = 0; i < ds.vectors.size(); ++i) {
        if (ds.vectors[i].size() != dims) {
            throw std::invalid_argument("inconsistent vector dimension at row " +
                                        std::to_string(i));
        }
        const std::string& label = ds.labels[i];
        if (label.empty() || label.find(',') != std::string::npos ||
            label.find('\n') != std::string::npos) {
            throw std::invalid_argument("label '" + label + "' cannot be stored in csv");
        }
        for (std::size_t d = 0; d < dims; ++d) out << format_double(ds.vectors[i][d]) << ',';
        out << label << '\n';
    }

    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << out.str();
    if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace qnc
