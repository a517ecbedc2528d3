#include "polyhom/json_io.hpp"

#include <fstream>
#include <sstream>

namespace polyhom {

using nlohmann::json;

json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // byte is the 1-based offset of the offending character
        const std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(column) +
                             ": " + e.what(),
                         line, column);
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path);
}

json group_to_json(const FinAbelianGroup& G) {
    json j{{"invariant_factors", G.invariant_factors()}, {"free_rank", G.free_rank()}, {"name", G.to_string()}};
    if (G.is_finite()) j["order"] = G.order();
    return j;
}

FinAbelianGroup group_from_json(const json& j) {
    return FinAbelianGroup(j.at("invariant_factors").get<std::vector<std::int64_t>>(), j.value("free_rank", std::size_t{0}));
}

json element_to_json(const GroupElement& g) { return g.coords(); }

json matrix_to_json(const IntMatrix& M) {
    json data = json::array();
    for (std::size_t r = 0; r < M.rows(); ++r)
        for (std::size_t c = 0; c < M.cols(); ++c) {
            const Integer& x = M(r, c);
            if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
                data.push_back(static_cast<std::int64_t>(x));
            else
                data.push_back(x.str());
        }
    return {{"rows", M.rows()}, {"cols", M.cols()}, {"data", data}};
}

IntMatrix matrix_from_json(const json& j) {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const json& data = j.at("data");
    if (!data.is_array()) throw std::invalid_argument("matrix data must be an array");
    // accept both flat row-major data and a list of rows
    std::vector<json> flat;
    for (const auto& x : data) {
        if (x.is_array())
            for (const auto& y : x) flat.push_back(y);
        else
            flat.push_back(x);
    }
    if (flat.size() != rows * cols)
        throw std::invalid_argument("matrix has " + std::to_string(flat.size()) + " entries, expected " +
                                    std::to_string(rows * cols));
    IntMatrix M(rows, cols);
    for (std::size_t k = 0; k < flat.size(); ++k) {
        const json& x = flat[k];
        if (x.is_number_integer())
            M(k / cols, k % cols) = x.get<std::int64_t>();
        else if (x.is_string())
            M(k / cols, k % cols) = Integer(x.get<std::string>());
        else
            throw std::invalid_argument("matrix entries must be integers");
    }
    return M;
}

FinAbelianGroup parse_group_spec(const std::string& spec) {
    std::vector<std::int64_t> orders;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("bad group spec \"" + spec + "\"");
        orders.push_back(std::stoll(part));
    }
    if (orders.empty()) throw std::invalid_argument("empty group spec");
    return FinAbelianGroup::from_orders(orders);
}

}  // namespace polyhom
