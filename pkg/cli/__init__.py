# cli package: command-line commands and the verification campaign
