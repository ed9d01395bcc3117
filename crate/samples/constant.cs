y:='x:=x+1;'; x:=0; reflect(y);$
