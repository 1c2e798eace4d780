from stdg_VEM.poly_basis.MonomialBasis import MonomialBasis, eval_basis, eval_basis_grad, n_monomials
from stdg_VEM.poly_basis.Quadrature import (polygon_quadrature, edge_quadrature,
                                            monomial_mass_matrix, lobatto_nodes,
                                            interval_quadrature)
from stdg_VEM.poly_basis.Lagrange import lagrange_values, lagrange_derivatives
