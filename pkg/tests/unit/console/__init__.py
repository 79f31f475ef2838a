import sure

sure
