#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <tailfrac/errors.hpp>
#include <tailfrac/montecarlo.hpp>

namespace tailfrac {

namespace {

const char* kHeader = "n,model,method,alpha,k0,k,mean,bias,mse,coverage,avg_length,failures";

std::string quote_if_needed(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string optional_field(const std::optional<double>& v) {
    return v.has_value() ? format_double(*v) : std::string();
}

// Splits one CSV record, honouring double-quoted fields.
std::vector<std::string> split_record(std::string_view line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(current);
    return fields;
}

double parse_number(const std::string& field, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0') {
        throw parameter_error("bad " + std::string(what) + " field '" + field + "' in CSV");
    }
    return v;
}

std::optional<double> parse_optional(const std::string& field, const char* what) {
    if (field.empty()) return {};
    return parse_number(field, what);
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string report_to_csv(const ExperimentReport& report) {
    std::string out(kHeader);
    out += '\n';
    for (const auto& row : report.rows) {
        out += std::to_string(row.n);
        out += ',';
        out += quote_if_needed(row.model_id);
        out += ',';
        out += quote_if_needed(row.method);
        out += ',';
        out += optional_field(row.alpha);
        out += ',';
        out += std::to_string(row.k0);
        out += ',';
        out += std::to_string(row.k);
        out += ',';
        out += format_double(row.mean);
        out += ',';
        out += format_double(row.bias);
        out += ',';
        out += format_double(row.mse);
        out += ',';
        out += optional_field(row.coverage);
        out += ',';
        out += optional_field(row.avg_length);
        out += ',';
        out += std::to_string(row.failures);
        out += '\n';
    }
    return out;
}

ExperimentReport report_from_csv(std::string_view csv) {
    ExperimentReport report;
    std::size_t pos = 0;
    bool saw_header = false;
    while (pos < csv.size()) {
        std::size_t eol = csv.find('\n', pos);
        if (eol == std::string_view::npos) eol = csv.size();
        const std::string_view line = csv.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.empty()) continue;
        if (!saw_header) {
            if (line != kHeader) {
                throw parameter_error("unexpected CSV header: " + std::string(line));
            }
            saw_header = true;
            continue;
        }
        const std::vector<std::string> fields = split_record(line);
        if (fields.size() != 12) {
            throw parameter_error("CSV record has " + std::to_string(fields.size()) +
                                  " fields, expected 12");
        }
        ReportRow row;
        row.n = static_cast<int>(parse_number(fields[0], "n"));
        row.model_id = fields[1];
        row.method = fields[2];
        row.alpha = parse_optional(fields[3], "alpha");
        row.k0 = static_cast<int>(parse_number(fields[4], "k0"));
        row.k = static_cast<int>(parse_number(fields[5], "k"));
        row.mean = parse_number(fields[6], "mean");
        row.bias = parse_number(fields[7], "bias");
        row.mse = parse_number(fields[8], "mse");
        row.coverage = parse_optional(fields[9], "coverage");
        row.avg_length = parse_optional(fields[10], "avg_length");
        row.failures = static_cast<int>(parse_number(fields[11], "failures"));
        report.rows.push_back(std::move(row));
    }
    if (!saw_header) throw parameter_error("CSV is missing its header row");
    return report;
}

}  // namespace tailfrac
