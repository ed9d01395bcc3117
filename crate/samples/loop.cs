y:='x:=x+1;'; x:=0; while x<1 {y:=y.'x:=x+1;'; x:=x+1;}; reflect(y);$
