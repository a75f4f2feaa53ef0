from .ode import DormandPrince45, solve_ivp
