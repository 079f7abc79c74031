#include "ppsim/io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ppsim {

std::string format_double(double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& token) {
    double value = 0.0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
        throw std::invalid_argument("bad numeric token: '" + token + "'");
    }
    return value;
}

int parse_int(const std::string& token) {
    int value = 0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
        throw std::invalid_argument("bad integer token: '" + token + "'");
    }
    return value;
}

std::string strip_comment(std::string line) {
    const auto pos = line.find('#');
    if (pos != std::string::npos) {
        line.erase(pos);
    }
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
        line.pop_back();
    }
    return line;
}

} // namespace

void write_network(std::ostream& out, const HawkesNetwork& net) {
    const int m = net.node_count();
    out << "M " << m << '\n';
    for (int i = 0; i < m; ++i) {
        out << "nu " << (i + 1) << ' ' << format_double(net.nu()[static_cast<std::size_t>(i)])
            << '\n';
    }
    for (int j = 0; j < m; ++j) {
        for (const auto& [target, kernel] : net.outgoing(j)) {
            out << "kernel " << (j + 1) << ' ' << (target + 1) << '\n';
            for (const auto& [t, delta] : kernel->steps()) {
                out << format_double(t) << ' ' << format_double(delta) << '\n';
            }
            out << '\n';
        }
    }
}

HawkesNetwork read_network(std::istream& in) {
    std::string line;
    int m = -1;
    std::vector<double> nu;
    KernelMap kernels;

    int kernel_source = -1;
    int kernel_target = -1;
    Scheduler steps;

    auto flush_kernel = [&]() {
        if (kernel_source >= 0) {
            kernels.emplace(std::make_pair(kernel_source, kernel_target),
                            InteractionKernel(std::move(steps)));
            steps = Scheduler{};
            kernel_source = -1;
            kernel_target = -1;
        }
    };

    while (std::getline(in, line)) {
        line = strip_comment(line);
        if (line.empty()) {
            flush_kernel();
            continue;
        }
        std::istringstream ss(line);
        std::string head;
        ss >> head;
        if (head == "M") {
            std::string count;
            ss >> count;
            m = parse_int(count);
            if (m <= 0) {
                throw std::invalid_argument("network file: bad node count");
            }
            nu.assign(static_cast<std::size_t>(m), 0.0);
        } else if (head == "nu") {
            std::string idx, value;
            ss >> idx >> value;
            const int i = parse_int(idx) - 1;
            if (m < 0 || i < 0 || i >= m) {
                throw std::invalid_argument("network file: nu index out of range");
            }
            nu[static_cast<std::size_t>(i)] = parse_double(value);
        } else if (head == "kernel") {
            flush_kernel();
            std::string src, tgt;
            ss >> src >> tgt;
            kernel_source = parse_int(src) - 1;
            kernel_target = parse_int(tgt) - 1;
        } else if (kernel_source >= 0) {
            std::string second;
            ss >> second;
            steps.insert(Event{parse_double(head), parse_double(second)});
        } else {
            throw std::invalid_argument("network file: unexpected line '" + line + "'");
        }
    }
    flush_kernel();
    if (m < 0) {
        throw std::invalid_argument("network file: missing M header");
    }
    return HawkesNetwork(std::move(nu), std::move(kernels));
}

void write_graph(std::ostream& out, int node_count, const EdgeList& edges) {
    out << "M " << node_count << '\n';
    for (const auto& [source, target] : edges) {
        out << (source + 1) << ' ' << (target + 1) << '\n';
    }
}

std::pair<int, EdgeList> read_graph(std::istream& in) {
    std::string line;
    int m = -1;
    EdgeList edges;
    while (std::getline(in, line)) {
        line = strip_comment(line);
        if (line.empty()) {
            continue;
        }
        std::istringstream ss(line);
        std::string a, b;
        ss >> a >> b;
        if (a == "M") {
            m = parse_int(b);
        } else {
            edges.emplace_back(parse_int(a) - 1, parse_int(b) - 1);
        }
    }
    if (m < 0) {
        throw std::invalid_argument("graph file: missing M header");
    }
    return {m, std::move(edges)};
}

void write_points_csv(std::ostream& out, const SimulationResult& result) {
    out << "time,node\n";
    for (std::size_t k = 0; k < result.times.size(); ++k) {
        out << format_double(result.times[k]) << ',' << (result.marks[k] + 1) << '\n';
    }
}

SimulationResult read_points_csv(std::istream& in) {
    SimulationResult result;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("points file: empty");
    }
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::invalid_argument("points file: bad row '" + line + "'");
        }
        result.times.push_back(parse_double(line.substr(0, comma)));
        result.marks.push_back(parse_int(line.substr(comma + 1)) - 1);
    }
    return result;
}

void write_report_csv(std::ostream& out, const TestReport& report, int node) {
    out << "test,node,p_value\n";
    for (const auto& entry : report.tests) {
        out << entry.name << ',' << (node + 1) << ',' << format_double(entry.p_value) << '\n';
    }
}

} // namespace ppsim
