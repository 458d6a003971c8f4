# Bi-parameter dyadic Hardy space toolkit
