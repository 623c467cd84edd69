# transforms package: affine action, reinterpretation and Wronskian laws
