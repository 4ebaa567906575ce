# Package vide
