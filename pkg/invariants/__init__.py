# invariants package: brackets, weighted semi-invariants, group catalog, realization residuals
