"""segcertify

Certification of segmentation models via randomized smoothing, with
multiple-testing corrections controlling the family-wise error rate.
"""
