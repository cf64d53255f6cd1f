#pragma once

#include "leontief/iotable.hpp"

namespace leontief {

// Money-side coefficients of one table. Column j of A holds j's input
// expenditure shares a_ij = M_ij / M_j, so columns plus the labor share sum
// to one. theta are GDP (final demand) shares, eta gross-output shares.
struct CoefficientSystem {
	std::vector<IndustryId> industries;
	Matrix A;           // N x N input coefficients
	Vector labor_share; // l~_j, payments to households per unit expenditure
	Vector theta;       // final demand shares, sums to 1
	Vector eta;         // gross output shares, sums to 1
	double gdp = 0.0;   // Y, total final demand
	double gross_output = 0.0;  // O, total expenditure

	int size() const { return static_cast<int>(industries.size()); }
};

// Physical counterpart under prices p and wage w: Phi = P A^T P^-1 with
// P = diag(p), labor per unit output l_i = l~_i p_i / w, consumption per
// unit labor c_i = theta_i w / p_i (household budget then gives w = c.p).
struct PhysicalSystem {
	std::vector<IndustryId> industries;
	Matrix Phi;    // Phi(i, j): good j used per unit of good i produced
	Vector labor;  // labor input per unit output
	Vector consumption;  // household consumption of each good per unit labor
	Vector prices;
	double wage = 1.0;
};
// The price equation reads p = Phi p + labor * w; Phi = P A^T P^-1 keeps it
// equivalent to the column-stochastic money-side identity.

// Validation entry points; throw ValidationError on violation.
void check_coefficients(const CoefficientSystem& cs, double tol = 1e-12);
void check_physical(const PhysicalSystem& ps, double price_rel_tol = 1e-10);

// a_ij = M_ij / M_j with M = gross_output(table). Errors: a retained
// industry with zero gross output is named in a ValidationError.
CoefficientSystem build_coefficients(const IOTable& table);

PhysicalSystem to_physical(const CoefficientSystem& cs, const Vector& prices, double wage);

// Inverse of to_physical: rebuild money-side coefficients from a physical
// system (theta is recovered from consumption expenditure shares).
CoefficientSystem from_physical(const PhysicalSystem& ps);

}  // namespace leontief
