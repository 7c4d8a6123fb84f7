#include "fsqc/predicates.hpp"

#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

namespace fsqc {

namespace {

using Rational = boost::multiprecision::cpp_rational;

int orient3dExact(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    // doubles convert to rationals exactly, so every step below is exact
    Rational bax = Rational(b.x()) - Rational(a.x());
    Rational bay = Rational(b.y()) - Rational(a.y());
    Rational baz = Rational(b.z()) - Rational(a.z());
    Rational cax = Rational(c.x()) - Rational(a.x());
    Rational cay = Rational(c.y()) - Rational(a.y());
    Rational caz = Rational(c.z()) - Rational(a.z());
    Rational dax = Rational(d.x()) - Rational(a.x());
    Rational day = Rational(d.y()) - Rational(a.y());
    Rational daz = Rational(d.z()) - Rational(a.z());
    Rational det = bax * (cay * daz - caz * day) + cax * (day * baz - daz * bay) +
                   dax * (bay * caz - baz * cay);
    if (det > 0) return 1;
    if (det < 0) return -1;
    return 0;
}

}  // namespace

int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    double bax = b.x() - a.x(), bay = b.y() - a.y(), baz = b.z() - a.z();
    double cax = c.x() - a.x(), cay = c.y() - a.y(), caz = c.z() - a.z();
    double dax = d.x() - a.x(), day = d.y() - a.y(), daz = d.z() - a.z();

    double det = bax * (cay * daz - caz * day) + cax * (day * baz - daz * bay) +
                 dax * (bay * caz - baz * cay);

    double permanent = std::abs(bax) * (std::abs(cay * daz) + std::abs(caz * day)) +
                       std::abs(cax) * (std::abs(day * baz) + std::abs(daz * bay)) +
                       std::abs(dax) * (std::abs(bay * caz) + std::abs(baz * cay));
    double errbound = 1e-14 * permanent;
    if (det > errbound) return 1;
    if (det < -errbound) return -1;
    return orient3dExact(a, b, c, d);
}

}  // namespace fsqc
