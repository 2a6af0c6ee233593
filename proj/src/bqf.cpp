#include "maasslift/bqf.hpp"

#include "maasslift/arith.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace ml {

namespace {

void check_disc(i64 disc) {
  i64 r = ((disc % 4) + 4) % 4;
  if (disc == 0 || (r != 0 && r != 1))
    throw std::domain_error("not a discriminant");
  if (disc > 0) {
    Int s = sqrt(Int(disc));
    if (s * s == disc) throw std::domain_error("square discriminant");
  }
}

// 0 < b < sqrt(disc) and |sqrt(disc) - 2|a|| < b, in exact arithmetic
bool is_reduced_indef(const BQForm& q, i64 disc) {
  if (q.b <= 0 || q.b * q.b >= disc) return false;
  Int t = 2 * abs(q.a);
  return (t - q.b) * (t - q.b) < disc && Int(disc) < (t + q.b) * (t + q.b);
}

}  // namespace

BQForm apply_matrix(const BQForm& q, const Mat22& m) {
  // (Q o M)(x, y) = Q(ax + by, cx + dy)
  BQForm out;
  out.a = q.eval(m.a, m.c);
  out.c = q.eval(m.b, m.d);
  out.b = 2 * q.a * m.a * m.b + q.b * (m.a * m.d + m.b * m.c) +
          2 * q.c * m.c * m.d;
  return out;
}

BQForm reduce_definite(const BQForm& q) {
  if (q.disc() >= 0 || q.a <= 0)
    throw std::domain_error("reduce_definite needs a positive-definite form");
  BQForm f = q;
  for (;;) {
    // translate b into (-a, a]
    if (f.b > f.a || f.b <= -f.a) {
      Int twoa = 2 * f.a;
      Int r = f.b % twoa;             // truncated toward zero
      if (r > f.a) r -= twoa;
      if (r <= -f.a) r += twoa;
      // c' = c + ((r^2 - b^2) / (4a)) exactly
      f.c += (r * r - f.b * f.b) / (2 * twoa);
      f.b = r;
    }
    if (f.c < f.a) {
      f = BQForm{f.c, -f.b, f.a};
      continue;
    }
    break;
  }
  if (f.a == f.c && f.b < 0) f.b = -f.b;
  return f;
}

std::vector<BQForm> reduced_indefinite_forms(i64 disc) {
  check_disc(disc);
  if (disc < 0) throw std::domain_error("needs a positive discriminant");
  std::vector<BQForm> out;
  Int s = sqrt(Int(disc));
  for (Int b = (disc % 2 == 0) ? 2 : 1; b <= s; b += 2) {
    Int n = (Int(disc) - b * b) / 4;  // = -ac > 0
    for (Int av = 1; av * av <= n; ++av) {
      if (n % av != 0) continue;
      Int cv = n / av;
      const std::pair<Int, Int> combos[4] = {
          {av, -cv}, {-av, cv}, {cv, -av}, {-cv, av}};
      for (auto& [aa, cc] : combos) {
        BQForm f{aa, b, cc};
        if (is_reduced_indef(f, disc)) out.push_back(f);
      }
    }
  }
  std::set<BQForm> dedupe(out.begin(), out.end());
  return std::vector<BQForm>(dedupe.begin(), dedupe.end());
}

BQForm rho_step(const BQForm& q, i64 disc) {
  Int s = sqrt(Int(disc));
  Int twoc = 2 * abs(q.c);
  // unique b' = -b (mod 2|c|) with sqrt(disc) - 2|c| < b' <= floor(sqrt(disc))
  Int b2 = s - ((s + q.b) % twoc + twoc) % twoc;
  Int c2 = (b2 * b2 - disc) / (4 * q.c);
  return BQForm{q.c, b2, c2};
}

ClassSet enumerate_classes(i64 disc) {
  check_disc(disc);
  ClassSet out;
  out.disc = disc;
  if (disc < 0) {
    for (Int a = 1; 4 * a * a <= -Int(disc) + a * a; ++a) {  // 3a^2 <= |disc|
      for (Int b = -a + 1; b <= a; ++b) {
        Int num = b * b - disc;
        if (num % (4 * a) != 0) continue;
        Int c = num / (4 * a);
        if (c < a) continue;
        if (a == c && b < 0) continue;
        out.reps.push_back(BQForm{a, b, c});
      }
    }
    return out;
  }
  std::vector<BQForm> reduced = reduced_indefinite_forms(disc);
  std::set<BQForm> seen;
  for (auto& start : reduced) {
    if (seen.count(start)) continue;
    out.reps.push_back(start);
    BQForm cur = start;
    do {
      seen.insert(cur);
      cur = rho_step(cur, disc);
    } while (cur != start);
  }
  return out;
}

int genus_character(const BQForm& q, i64 d1, i64 d2) {
  i64 r1 = ((d1 % 4) + 4) % 4, r2 = ((d2 % 4) + 4) % 4;
  if (d1 == 0 || d2 == 0 || (r1 != 0 && r1 != 1) || (r2 != 0 && r2 != 1))
    throw std::domain_error("genus character needs discriminant arguments");
  if (q.disc() != Int(d1) * Int(d2))
    throw std::domain_error("form discriminant must equal d1*d2");
  if (d1 == 1) return 1;
  Int content = gcd(gcd(abs(q.a), abs(q.b)), gcd(abs(q.c), abs(Int(d1))));
  if (content > 1) return 0;
  Int ad1 = abs(Int(d1));
  for (i64 bound = 8; bound <= (i64{1} << 20); bound *= 2) {
    for (i64 x = -bound; x <= bound; ++x)
      for (i64 y = -bound; y <= bound; ++y) {
        if (std::gcd(x, y) != 1) continue;
        Int r = q.eval(Int(x), Int(y));
        if (r == 0) continue;
        if (gcd(abs(r), ad1) != 1) continue;
        // chi_{d1} has period |d1|; reduce to a positive residue
        Int rr;
        mpz_mod(rr.get_mpz_t(), r.get_mpz_t(), ad1.get_mpz_t());
        return kronecker(Int(d1), rr);
      }
  }
  throw std::runtime_error("genus character search exhausted");
}

PellSolution pell(i64 disc) {
  check_disc(disc);
  if (disc < 0) throw std::domain_error("pell needs a positive discriminant");
  Int s = sqrt(Int(disc));
  Int b0 = (s % 2 == disc % 2) ? s : s - 1;
  BQForm start{1, b0, (b0 * b0 - disc) / 4};
  Mat22 m{1, 0, 0, 1};
  BQForm cur = start;
  do {
    BQForm next = rho_step(cur, disc);
    Int step = (cur.b + next.b) / (2 * cur.c);
    // m <- m * [[0, -1], [1, step]]
    m = Mat22{m.b, -m.a + m.b * step, m.d, -m.c + m.d * step};
    cur = next;
  } while (cur != start);
  if (m.a + m.d < 0) m = Mat22{-m.a, -m.b, -m.c, -m.d};
  Int t = m.a + m.d;
  Int u = -m.c;  // start.a = 1
  if (u < 0) u = -u;
  return PellSolution{t, u};
}

Mat22 automorph(const BQForm& q) {
  Int d = q.disc();
  if (d <= 0 || !d.fits_slong_p())
    throw std::domain_error("automorph needs a positive discriminant form");
  PellSolution p = pell(d.get_si());
  return Mat22{(p.t + q.b * p.u) / 2, q.c * p.u, -q.a * p.u,
               (p.t - q.b * p.u) / 2};
}

HeegnerPoint heegner_point(const BQForm& q) {
  Int d = q.disc();
  if (d >= 0 || q.a <= 0)
    throw std::domain_error("heegner_point needs a positive-definite form");
  double a = q.a.get_d(), b = q.b.get_d();
  double root = std::sqrt(-d.get_d());
  HeegnerPoint out;
  out.tau = std::complex<double>(-b / (2 * a), root / (2 * a));
  BQForm r = reduce_definite(q);
  if (r.a == r.c && r.b == 0)
    out.omega = 2;
  else if (r.a == r.b && r.b == r.c)
    out.omega = 3;
  else
    out.omega = 1;
  return out;
}

Geodesic geodesic(const BQForm& q) {
  Int d = q.disc();
  if (d <= 0) throw std::domain_error("geodesic needs a positive discriminant");
  Int s = sqrt(d);
  if (s * s == d) throw std::domain_error("square discriminant");
  if (q.a == 0) throw std::domain_error("apply a translation first: a = 0");
  Geodesic out;
  out.center = make_rational(-q.b, 2 * q.a);
  out.radius = std::sqrt(d.get_d()) / (2 * std::abs(q.a.get_d()));
  out.orientation = q.a > 0 ? 1 : -1;
  return out;
}

}  // namespace ml
