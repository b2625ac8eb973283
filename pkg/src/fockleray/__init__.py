from fockleray.words import Orbit, Word, necklace_count, orbit_of, rotate
from fockleray.fock import FockVector, VectorField, theta_l, theta_l_star
from fockleray.ncpoly import BiPolynomial, NcPolynomial
from fockleray.projections import cyclic_gradient_basis, leray, project_cyclic
from fockleray.bases import dim_report, divfree_basis, zeta_basis
