#include "lnu/graph_io.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lnu/io_util.hpp"
#include "lnu/error.hpp"

namespace lnu {

Graph read_edge_list(std::istream& in, std::optional<std::size_t> n) {
  std::vector<Edge> edges;
  std::optional<std::size_t> declared;
  long long max_id = -1;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string key = "# nodes:";
      if (line.rfind(key, 0) == 0) {
        try {
          declared = static_cast<std::size_t>(std::stoull(line.substr(key.size())));
        } catch (const std::exception&) {
          throw Error("edge list line " + std::to_string(line_no) + ": bad node-count header");
        }
      }
      continue;
    }
    std::istringstream fields(line);
    long long a = 0;
    long long b = 0;
    if (!(fields >> a >> b)) {
      throw Error("edge list line " + std::to_string(line_no) + ": expected two node ids");
    }
    if (a < 0 || b < 0) {
      throw Error("edge list line " + std::to_string(line_no) + ": negative node id");
    }
    max_id = std::max({max_id, a, b});
    edges.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b)});
  }
  std::size_t count = static_cast<std::size_t>(max_id + 1);
  if (declared) count = *declared;
  if (n) {
    if (declared && *declared != *n) {
      throw Error("edge list declares " + std::to_string(*declared) + " nodes but " +
                  std::to_string(*n) + " were expected");
    }
    count = *n;
  }
  return Graph::from_edges(count, edges);
}

Graph read_edge_list(const std::filesystem::path& path, std::optional<std::size_t> n) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open edge list " + path.string());
  return read_edge_list(in, n);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# nodes: " << g.num_nodes() << '\n';
  for (const Edge& e : g.edges()) out << e.u << '\t' << e.v << '\n';
}

void write_edge_list(const std::filesystem::path& path, const Graph& g) {
  std::ostringstream buffer;
  write_edge_list(buffer, g);
  write_file_atomic(path, buffer.str());
}

}  // namespace lnu
