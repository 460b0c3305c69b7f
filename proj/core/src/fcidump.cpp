#include "qcafqmc/fcidump.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qcafqmc/artifacts.hpp"
#include "qcafqmc/error.hpp"

namespace qcafqmc {

std::string fcidump_to_string(const MOHamiltonian& ham, int n_electrons) {
  int n = ham.n_orb;
  std::string out = " &FCI NORB=" + std::to_string(n) + ",NELEC=" +
                    std::to_string(n_electrons) + ",MS2=0,\n  ORBSYM=";
  for (int i = 0; i < n; ++i) out += "1,";
  out += "\n  ISYM=1,\n &END\n";

  char buf[96];
  auto emit = [&](double v, int p, int q, int r, int s) {
    std::snprintf(buf, sizeof(buf), "%24.16e %3d %3d %3d %3d\n", v, p, q, r, s);
    out += buf;
  };
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q) {
      std::size_t pq = FoldedEri::pair_index(p, q);
      for (int r = 0; r <= p; ++r)
        for (int s = 0; s <= r; ++s) {
          if (FoldedEri::pair_index(r, s) > pq) continue;
          double v = ham.eri(p, q, r, s);
          if (v != 0.0) emit(v, p + 1, q + 1, r + 1, s + 1);
        }
    }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q)
      if (ham.h1(p, q) != 0.0) emit(ham.h1(p, q), p + 1, q + 1, 0, 0);
  emit(ham.e_nuc, 0, 0, 0, 0);
  return out;
}

void save_fcidump(const MOHamiltonian& ham, int n_electrons, const std::string& path) {
  write_text_file(path, fcidump_to_string(ham, n_electrons));
}

FcidumpData parse_fcidump(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  std::string line;
  bool in_header = true;
  std::string body;
  while (std::getline(in, line)) {
    if (in_header) {
      header += line + " ";
      if (line.find("&END") != std::string::npos || line.find("/") != std::string::npos)
        in_header = false;
      continue;
    }
    body += line + "\n";
  }

  auto read_int = [&](const std::string& key) {
    auto pos = header.find(key);
    require(pos != std::string::npos, "fcidump_malformed", "missing " + key + " in header");
    pos += key.size();
    while (pos < header.size() && (header[pos] == '=' || std::isspace(header[pos]))) ++pos;
    return std::atoi(header.c_str() + pos);
  };
  int n = read_int("NORB");
  int nelec = read_int("NELEC");
  require(n > 0, "fcidump_malformed", "NORB must be positive");

  FcidumpData data;
  data.n_electrons = nelec;
  data.ham.n_orb = n;
  data.ham.h1 = Eigen::MatrixXd::Zero(n, n);
  data.ham.eri = FoldedEri(n);

  std::istringstream rec(body);
  double v;
  int p, q, r, s;
  while (rec >> v >> p >> q >> r >> s) {
    if (p == 0 && q == 0 && r == 0 && s == 0) {
      data.ham.e_nuc = v;
    } else if (r == 0 && s == 0) {
      data.ham.h1(p - 1, q - 1) = v;
      data.ham.h1(q - 1, p - 1) = v;
    } else {
      data.ham.eri.set(p - 1, q - 1, r - 1, s - 1, v);
    }
  }
  return data;
}

FcidumpData load_fcidump(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "io_error", "cannot read FCIDUMP from " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_fcidump(ss.str());
}

}  // namespace qcafqmc
