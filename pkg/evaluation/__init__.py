# evaluation package: exact point evaluation, curves, identity checks and signatures
