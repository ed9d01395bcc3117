x:='reflect(x);$'; reflect(x);$
