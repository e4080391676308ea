"""Config parsing, trajectory files, figures and console output"""
